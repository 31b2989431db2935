//! Independent validators, a brute-force completion oracle for small orders,
//! density profiling, and a seeded random instance generator. Everything
//! else in the crate is checked against this module.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{apply_delta, LatinGrid, PartialGrid, Symbol, TradeDelta};

/// Default largest order the exhaustive oracle will attempt.
pub const ORACLE_ORDER_CAP: u32 = 16;

pub fn is_latin(grid: &LatinGrid) -> bool {
    let n = grid.order();
    let mut seen = vec![false; n as usize + 1];
    for r in 1..=n {
        seen.iter_mut().for_each(|v| *v = false);
        for c in 1..=n {
            let s = grid.get(r, c).get() as usize;
            if s < 1 || s > n as usize || seen[s] {
                return false;
            }
            seen[s] = true;
        }
    }
    for c in 1..=n {
        seen.iter_mut().for_each(|v| *v = false);
        for r in 1..=n {
            let s = grid.get(r, c).get() as usize;
            if seen[s] {
                return false;
            }
            seen[s] = true;
        }
    }
    true
}

pub fn is_partial_latin(p: &PartialGrid) -> bool {
    let n = p.order();
    let mut seen = vec![false; n as usize + 1];
    for r in 1..=n {
        seen.iter_mut().for_each(|v| *v = false);
        for c in 1..=n {
            if let Some(s) = p.get(r, c) {
                let s = s.get() as usize;
                if s < 1 || s > n as usize || seen[s] {
                    return false;
                }
                seen[s] = true;
            }
        }
    }
    for c in 1..=n {
        seen.iter_mut().for_each(|v| *v = false);
        for r in 1..=n {
            if let Some(s) = p.get(r, c) {
                let s = s.get() as usize;
                if seen[s] {
                    return false;
                }
                seen[s] = true;
            }
        }
    }
    true
}

/// `grid` agrees with `p` at every filled cell of `p`.
pub fn extends(grid: &LatinGrid, p: &PartialGrid) -> bool {
    if grid.order() != p.order() {
        return false;
    }
    p.filled_cells()
        .iter()
        .all(|&(cell, s)| grid.get_cell(cell) == s)
}

/// Fill statistics of a partial square.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub max_row_fill: u32,
    pub max_col_fill: u32,
    pub max_sym_fill: u32,
    pub total_fill: u32,
    /// max line fill / n
    pub epsilon_actual: f64,
    /// total fill / n^2
    pub delta_actual: f64,
}

pub fn density_profile(p: &PartialGrid) -> DensityProfile {
    let n = p.order();
    let mut row = vec![0u32; n as usize + 1];
    let mut col = vec![0u32; n as usize + 1];
    let mut sym = vec![0u32; n as usize + 1];
    let mut total = 0u32;
    for (cell, s) in p.filled_cells() {
        row[cell.row as usize] += 1;
        col[cell.col as usize] += 1;
        sym[s.get() as usize] += 1;
        total += 1;
    }
    let max_row_fill = row.iter().copied().max().unwrap_or(0);
    let max_col_fill = col.iter().copied().max().unwrap_or(0);
    let max_sym_fill = sym.iter().copied().max().unwrap_or(0);
    let line_max = max_row_fill.max(max_col_fill).max(max_sym_fill);
    DensityProfile {
        max_row_fill,
        max_col_fill,
        max_sym_fill,
        total_fill: total,
        epsilon_actual: line_max as f64 / n as f64,
        delta_actual: total as f64 / (n as f64 * n as f64),
    }
}

/// True iff the delta's before-values match `grid`, applying it keeps the
/// grid latin, and each touched row and column keeps its symbol multiset.
pub fn validate_delta(grid: &LatinGrid, delta: &TradeDelta) -> bool {
    let mut after = grid.clone();
    if apply_delta(&mut after, delta).is_err() {
        return false;
    }
    if !is_latin(&after) {
        return false;
    }
    let n = grid.order();
    let rows: std::collections::BTreeSet<u32> = delta.cells().map(|c| c.row).collect();
    let cols: std::collections::BTreeSet<u32> = delta.cells().map(|c| c.col).collect();
    for &r in &rows {
        let mut before_syms: Vec<u16> = (1..=n).map(|c| grid.get(r, c).get()).collect();
        let mut after_syms: Vec<u16> = (1..=n).map(|c| after.get(r, c).get()).collect();
        before_syms.sort_unstable();
        after_syms.sort_unstable();
        if before_syms != after_syms {
            return false;
        }
    }
    for &c in &cols {
        let mut before_syms: Vec<u16> = (1..=n).map(|r| grid.get(r, c).get()).collect();
        let mut after_syms: Vec<u16> = (1..=n).map(|r| after.get(r, c).get()).collect();
        before_syms.sort_unstable();
        after_syms.sort_unstable();
        if before_syms != after_syms {
            return false;
        }
    }
    true
}

/// Exhaustive completion search, most-constrained-cell first, symbol order
/// randomized by `seed`. Deterministic for a fixed seed. Only intended for
/// orders up to `ORACLE_ORDER_CAP`.
pub fn backtrack_complete(p: &PartialGrid, seed: u64) -> Option<LatinGrid> {
    let n = p.order();
    assert!(n <= ORACLE_ORDER_CAP, "oracle capped at order {}", ORACLE_ORDER_CAP);
    if !is_partial_latin(p) {
        return None;
    }
    if n == 0 {
        return Some(LatinGrid::from_rows(vec![]));
    }

    // Bitmask per row/column of symbols still available (bit s-1 = symbol s).
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut row_free = vec![full; n as usize + 1];
    let mut col_free = vec![full; n as usize + 1];
    let mut grid = LatinGrid::filled(n, Symbol(1));
    let mut blanks = Vec::new();
    for r in 1..=n {
        for c in 1..=n {
            match p.get(r, c) {
                Some(s) => {
                    let bit = 1u32 << (s.get() - 1);
                    row_free[r as usize] &= !bit;
                    col_free[c as usize] &= !bit;
                    grid.set(r, c, s);
                }
                None => blanks.push((r, c)),
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sym_order: Vec<u16> = (1..=n as u16).collect();
    sym_order.shuffle(&mut rng);

    fn solve(
        grid: &mut LatinGrid,
        blanks: &mut Vec<(u32, u32)>,
        row_free: &mut [u32],
        col_free: &mut [u32],
        sym_order: &[u16],
    ) -> bool {
        if blanks.is_empty() {
            return true;
        }
        // Most constrained cell first.
        let (best_i, _) = blanks
            .iter()
            .enumerate()
            .map(|(i, &(r, c))| {
                (
                    i,
                    (row_free[r as usize] & col_free[c as usize]).count_ones(),
                )
            })
            .min_by_key(|&(_, cands)| cands)
            .unwrap();
        let (r, c) = blanks.swap_remove(best_i);
        let avail = row_free[r as usize] & col_free[c as usize];
        if avail != 0 {
            for &s in sym_order {
                let bit = 1u32 << (s - 1);
                if avail & bit != 0 {
                    row_free[r as usize] &= !bit;
                    col_free[c as usize] &= !bit;
                    grid.set(r, c, Symbol(s));
                    if solve(grid, blanks, row_free, col_free, sym_order) {
                        return true;
                    }
                    row_free[r as usize] |= bit;
                    col_free[c as usize] |= bit;
                }
            }
        }
        // Undo the swap_remove so sibling branches see a stable layout.
        blanks.push((r, c));
        let last = blanks.len() - 1;
        blanks.swap(best_i, last);
        false
    }

    if solve(&mut grid, &mut blanks, &mut row_free, &mut col_free, &sym_order) {
        debug_assert!(is_latin(&grid));
        Some(grid)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    GenerationFailed(String),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::GenerationFailed(msg) => write!(f, "generation failed: {}", msg),
        }
    }
}

impl std::error::Error for GenError {}

/// Seeded random partial square with per-line fill at most floor(epsilon*n)
/// and total fill floor(delta*n^2). Placement picks uniformly among empty
/// cells with unsaturated row/column and an admissible symbol; dead ends
/// remove a few placed cells and retry, bounded.
pub fn generate_pls(n: u32, epsilon: f64, delta: f64, seed: u64) -> Result<PartialGrid, GenError> {
    let target = (delta * n as f64 * n as f64).floor() as u32;
    if target == 0 {
        return Ok(PartialGrid::empty(n));
    }
    let cap = (epsilon * n as f64).floor() as u32;
    if cap == 0 {
        return Err(GenError::GenerationFailed(format!(
            "line cap floor(epsilon*n) = 0 cannot host {} cells",
            target
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _restart in 0..64 {
        let mut p = PartialGrid::empty(n);
        let mut row_fill = vec![0u32; n as usize + 1];
        let mut col_fill = vec![0u32; n as usize + 1];
        let mut sym_fill = vec![0u32; n as usize + 1];
        let mut placed: Vec<(u32, u32, u16)> = Vec::new();
        let mut stalls = 0;
        let mut budget: u64 = 2_000 * u64::from(n) + 40 * u64::from(target);
        while (placed.len() as u32) < target && budget > 0 {
            budget -= 1;
            let r = rng.random_range(1..=n);
            let c = rng.random_range(1..=n);
            let mut ok = false;
            if p.get(r, c).is_none()
                && row_fill[r as usize] < cap
                && col_fill[c as usize] < cap
            {
                let mut syms: Vec<u16> = (1..=n as u16)
                    .filter(|&s| {
                        sym_fill[s as usize] < cap
                            && (1..=n).all(|cc| p.get(r, cc) != Some(Symbol(s)))
                            && (1..=n).all(|rr| p.get(rr, c) != Some(Symbol(s)))
                    })
                    .collect();
                if !syms.is_empty() {
                    syms.shuffle(&mut rng);
                    let s = syms[0];
                    p.set(r, c, Some(Symbol(s)));
                    row_fill[r as usize] += 1;
                    col_fill[c as usize] += 1;
                    sym_fill[s as usize] += 1;
                    placed.push((r, c, s));
                    ok = true;
                }
            }
            if ok {
                stalls = 0;
            } else {
                stalls += 1;
                if stalls > 200 * n as usize {
                    // Back out a handful of placements and keep going.
                    for _ in 0..placed.len().min(4) {
                        let i = rng.random_range(0..placed.len());
                        let (r, c, s) = placed.swap_remove(i);
                        p.set(r, c, None);
                        row_fill[r as usize] -= 1;
                        col_fill[c as usize] -= 1;
                        sym_fill[s as usize] -= 1;
                    }
                    stalls = 0;
                }
            }
        }
        if placed.len() as u32 == target {
            debug_assert!(is_partial_latin(&p));
            return Ok(p);
        }
    }
    Err(GenError::GenerationFailed(format!(
        "could not place {} cells under line cap {}",
        target, cap
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CellCoord;

    fn intro_completable() -> PartialGrid {
        let mut p = PartialGrid::empty(3);
        p.set(1, 1, Some(Symbol(1)));
        p.set(1, 2, Some(Symbol(2)));
        p.set(2, 2, Some(Symbol(3)));
        p.set(3, 3, Some(Symbol(2)));
        p
    }

    fn intro_uncompletable() -> PartialGrid {
        let mut p = PartialGrid::empty(3);
        p.set(1, 1, Some(Symbol(1)));
        p.set(2, 2, Some(Symbol(1)));
        p.set(3, 3, Some(Symbol(2)));
        p
    }

    #[test]
    fn is_latin_on_three_by_three() {
        let g = LatinGrid::from_rows(vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]);
        assert!(is_latin(&g));
        let bad = LatinGrid::from_rows(vec![vec![1, 1, 3], vec![2, 3, 1], vec![3, 2, 2]]);
        assert!(!is_latin(&bad));
    }

    #[test]
    fn partial_latin_check() {
        assert!(is_partial_latin(&intro_completable()));
        assert!(is_partial_latin(&intro_uncompletable()));
        let mut bad = PartialGrid::empty(3);
        bad.set(1, 1, Some(Symbol(2)));
        bad.set(1, 3, Some(Symbol(2)));
        assert!(!is_partial_latin(&bad));
    }

    #[test]
    fn density_profile_examples() {
        let empty = PartialGrid::empty(5);
        let d = density_profile(&empty);
        assert_eq!(d.total_fill, 0);
        assert_eq!(d.epsilon_actual, 0.0);
        assert_eq!(d.delta_actual, 0.0);

        let d = density_profile(&intro_completable());
        assert_eq!(d.total_fill, 4);
        assert_eq!(d.max_row_fill, 2);
        assert!((d.epsilon_actual - 2.0 / 3.0).abs() < 1e-12);
        assert!((d.delta_actual - 4.0 / 9.0).abs() < 1e-12);

        let full = LatinGrid::from_rows(vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]);
        let mut p = PartialGrid::empty(3);
        for r in 1..=3 {
            for c in 1..=3 {
                p.set(r, c, Some(full.get(r, c)));
            }
        }
        let d = density_profile(&p);
        assert_eq!(d.epsilon_actual, 1.0);
        assert_eq!(d.delta_actual, 1.0);
    }

    #[test]
    fn validate_delta_accepts_intro_trade() {
        let g = LatinGrid::from_rows(vec![
            vec![1, 2, 3, 4],
            vec![4, 1, 2, 3],
            vec![3, 4, 1, 2],
            vec![2, 3, 4, 1],
        ]);
        let delta = TradeDelta::from_symbol_changes(vec![
            (CellCoord::new(1, 1), Symbol(1), Symbol(3)),
            (CellCoord::new(1, 3), Symbol(3), Symbol(1)),
            (CellCoord::new(3, 1), Symbol(3), Symbol(1)),
            (CellCoord::new(3, 3), Symbol(1), Symbol(3)),
        ]);
        assert!(validate_delta(&g, &delta));
    }

    #[test]
    fn validate_delta_rejects_single_cell_change() {
        let g = LatinGrid::from_rows(vec![
            vec![1, 2, 3, 4],
            vec![4, 1, 2, 3],
            vec![3, 4, 1, 2],
            vec![2, 3, 4, 1],
        ]);
        let delta = TradeDelta::from_symbol_changes(vec![(
            CellCoord::new(1, 1),
            Symbol(1),
            Symbol(3),
        )]);
        assert!(!validate_delta(&g, &delta));
    }

    #[test]
    fn oracle_completes_and_refuses() {
        let done = backtrack_complete(&intro_completable(), 0).expect("completable");
        assert!(is_latin(&done));
        assert!(extends(&done, &intro_completable()));
        assert!(backtrack_complete(&intro_uncompletable(), 0).is_none());
        let empty = PartialGrid::empty(4);
        let done = backtrack_complete(&empty, 1).unwrap();
        assert!(is_latin(&done));
    }

    #[test]
    fn oracle_deterministic_per_seed() {
        let p = intro_completable();
        assert_eq!(backtrack_complete(&p, 5), backtrack_complete(&p, 5));
    }

    #[test]
    fn generator_respects_profile() {
        let p = generate_pls(1000, 0.005, 4e-5, 1).unwrap();
        let d = density_profile(&p);
        assert_eq!(d.total_fill, 40);
        assert!(d.max_row_fill <= 5 && d.max_col_fill <= 5 && d.max_sym_fill <= 5);
        assert!(d.epsilon_actual <= 0.005);
        assert!(is_partial_latin(&p));
    }

    #[test]
    fn generator_deterministic_and_empty_cases() {
        assert_eq!(
            generate_pls(30, 0.1, 0.01, 7).unwrap(),
            generate_pls(30, 0.1, 0.01, 7).unwrap()
        );
        let p = generate_pls(10, 0.5, 0.0, 3).unwrap();
        assert_eq!(p.filled_count(), 0);
    }
}
