//! Exhaustive subset search with a schedule-independent answer.
//!
//! Combinations are generated in lexicographic order and tested in
//! fixed-size batches; inside a batch the predicate runs in parallel and the
//! first hit by position wins, so the reported witness is always the
//! lexicographically least one no matter how many workers run.

use rayon::prelude::*;

const BATCH: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Least combination satisfying the predicate, and subsets tested.
    Found(Vec<usize>, u64),
    /// Every combination tested, none matched.
    Exhausted(u64),
    /// Budget ran out first.
    BudgetExceeded(u64),
}

/// Lexicographic successor of a `size`-combination of `0..m`.
fn next_combination(c: &mut [usize], m: usize) -> bool {
    let size = c.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if c[i] < m - size + i {
            c[i] += 1;
            for j in i + 1..size {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First `size`-subset of `0..m` (lexicographic) accepted by `pred`, testing
/// at most `budget` subsets.
pub fn first_combination<F>(m: usize, size: usize, budget: u64, pred: F) -> SearchOutcome
where
    F: Fn(&[usize]) -> bool + Sync,
{
    if size > m {
        return SearchOutcome::Exhausted(0);
    }
    let mut current: Vec<usize> = (0..size).collect();
    let mut more = true;
    let mut tested = 0u64;
    while more {
        let room = budget.saturating_sub(tested);
        if room == 0 {
            return SearchOutcome::BudgetExceeded(tested);
        }
        let take = BATCH.min(usize::try_from(room).unwrap_or(usize::MAX));
        let mut batch = Vec::with_capacity(take);
        while more && batch.len() < take {
            batch.push(current.clone());
            more = size > 0 && next_combination(&mut current, m);
        }
        if let Some(pos) = batch.par_iter().position_first(|c| pred(c)) {
            tested += pos as u64 + 1;
            return SearchOutcome::Found(batch.swap_remove(pos), tested);
        }
        tested += batch.len() as u64;
    }
    SearchOutcome::Exhausted(tested)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_all_combinations_in_order() {
        let seen = std::sync::Mutex::new(Vec::new());
        let out = first_combination(5, 3, u64::MAX, |c| {
            seen.lock().unwrap().push(c.to_vec());
            false
        });
        assert_eq!(out, SearchOutcome::Exhausted(10));
        let mut seen = seen.into_inner().unwrap();
        let sorted = {
            let mut s = seen.clone();
            s.sort();
            s
        };
        seen.sort();
        assert_eq!(seen, sorted);
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
    }

    #[test]
    fn finds_least_witness() {
        let out = first_combination(2000, 2, u64::MAX, |c| c[0] + c[1] >= 1500);
        assert_eq!(out, SearchOutcome::Found(vec![0, 1500], 1500));
    }

    #[test]
    fn respects_budget() {
        let out = first_combination(10, 2, 7, |_| false);
        assert_eq!(out, SearchOutcome::BudgetExceeded(7));
    }

    #[test]
    fn empty_combination() {
        assert_eq!(
            first_combination(3, 0, 10, |c| c.is_empty()),
            SearchOutcome::Found(vec![], 1)
        );
        assert_eq!(first_combination(2, 3, 10, |_| true), SearchOutcome::Exhausted(0));
    }

    #[test]
    fn independent_of_thread_count() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| first_combination(60, 3, u64::MAX, |c| (c[0] * 7 + c[1] * 3 + c[2]) % 97 == 13))
        };
        assert_eq!(run(1), run(4));
    }
}
