//! Core data model: grids, signed cells, trade deltas, and the disturbance
//! ledger consulted by the trade search.
//!
//! Symbols and coordinates are 1-based everywhere in the public API. Grids
//! store symbols as `u16`, so orders up to 65535 are representable.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

/// A symbol in `1..=n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(pub u16);

impl Symbol {
    pub fn get(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A 1-based (row, col) coordinate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CellCoord {
    pub row: u32,
    pub col: u32,
}

impl CellCoord {
    pub fn new(row: u32, col: u32) -> Self {
        CellCoord { row, col }
    }

    /// Mirror across the main diagonal.
    pub fn transposed(self) -> Self {
        CellCoord {
            row: self.col,
            col: self.row,
        }
    }
}

impl fmt::Display for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A fully filled n x n square. Latin-ness is not enforced on every write;
/// `verify::is_latin` performs the full check.
#[derive(Clone, PartialEq, Eq)]
pub struct LatinGrid {
    order: u32,
    cells: Vec<u16>,
}

impl LatinGrid {
    pub fn filled(order: u32, sym: Symbol) -> Self {
        LatinGrid {
            order,
            cells: vec![sym.0; (order * order) as usize],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u16>>) -> Self {
        let order = rows.len() as u32;
        let mut cells = Vec::with_capacity((order * order) as usize);
        for r in &rows {
            assert_eq!(r.len() as u32, order, "ragged row");
            cells.extend_from_slice(r);
        }
        LatinGrid { order, cells }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn idx(&self, row: u32, col: u32) -> usize {
        debug_assert!(row >= 1 && row <= self.order && col >= 1 && col <= self.order);
        ((row - 1) * self.order + (col - 1)) as usize
    }

    pub fn get(&self, row: u32, col: u32) -> Symbol {
        Symbol(self.cells[self.idx(row, col)])
    }

    pub fn set(&mut self, row: u32, col: u32, sym: Symbol) {
        let i = self.idx(row, col);
        self.cells[i] = sym.0;
    }

    pub fn get_cell(&self, cell: CellCoord) -> Symbol {
        self.get(cell.row, cell.col)
    }

    /// Row index holding `sym` in column `col`, by linear scan.
    pub fn row_of(&self, sym: Symbol, col: u32) -> Option<u32> {
        (1..=self.order).find(|&r| self.get(r, col) == sym)
    }

    /// Column index holding `sym` in row `row`, by linear scan.
    pub fn col_of(&self, sym: Symbol, row: u32) -> Option<u32> {
        (1..=self.order).find(|&c| self.get(row, c) == sym)
    }

    pub fn transposed(&self) -> LatinGrid {
        let n = self.order;
        let mut t = self.clone();
        for r in 1..=n {
            for c in 1..=n {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }
}

impl fmt::Debug for LatinGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LatinGrid(order={})", self.order)?;
        for r in 1..=self.order {
            for c in 1..=self.order {
                write!(f, "{:>3}", self.get(r, c).0)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// An n x n square with optional entries. Blank cells are stored as 0.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialGrid {
    order: u32,
    cells: Vec<u16>,
}

impl PartialGrid {
    pub fn empty(order: u32) -> Self {
        PartialGrid {
            order,
            cells: vec![0; (order * order) as usize],
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn idx(&self, row: u32, col: u32) -> usize {
        debug_assert!(row >= 1 && row <= self.order && col >= 1 && col <= self.order);
        ((row - 1) * self.order + (col - 1)) as usize
    }

    pub fn get(&self, row: u32, col: u32) -> Option<Symbol> {
        match self.cells[self.idx(row, col)] {
            0 => None,
            v => Some(Symbol(v)),
        }
    }

    pub fn set(&mut self, row: u32, col: u32, sym: Option<Symbol>) {
        let i = self.idx(row, col);
        self.cells[i] = sym.map_or(0, |s| s.0);
    }

    pub fn is_filled(&self, row: u32, col: u32) -> bool {
        self.cells[self.idx(row, col)] != 0
    }

    pub fn filled_cells(&self) -> Vec<(CellCoord, Symbol)> {
        let mut out = Vec::new();
        for r in 1..=self.order {
            for c in 1..=self.order {
                if let Some(s) = self.get(r, c) {
                    out.push((CellCoord::new(r, c), s));
                }
            }
        }
        out
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|&&v| v != 0).count()
    }
}

impl fmt::Debug for PartialGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PartialGrid(order={})", self.order)?;
        for r in 1..=self.order {
            for c in 1..=self.order {
                match self.get(r, c) {
                    Some(s) => write!(f, "{:>3}", s.0)?,
                    None => write!(f, "  .")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A signed multiset of symbols, the content of one cell of an improper
/// square. Net multiplicity of each symbol must stay in {-1, 0, +1}; a net
/// of -1 is rejected at construction time by the operations below, so a
/// stored entry is +1 or -1 per symbol with at most one sign each.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedCell {
    entries: BTreeMap<Symbol, i32>,
}

impl SignedCell {
    pub fn single(sym: Symbol) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(sym, 1);
        SignedCell { entries }
    }

    /// Adds `delta` (+1 or -1) of `sym`, cancelling to zero where possible.
    /// Returns false if the result would carry a net multiplicity outside
    /// {-1, 0, +1}; the cell is left unchanged in that case.
    pub fn add(&mut self, sym: Symbol, delta: i32) -> bool {
        debug_assert!(delta == 1 || delta == -1);
        let cur = self.entries.get(&sym).copied().unwrap_or(0);
        let next = cur + delta;
        if !(-1..=1).contains(&next) {
            return false;
        }
        if next == 0 {
            self.entries.remove(&sym);
        } else {
            self.entries.insert(sym, next);
        }
        true
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when the cell is a single positive symbol.
    pub fn is_proper(&self) -> bool {
        self.entries.len() == 1 && self.entries.values().next() == Some(&1)
    }

    pub fn as_proper(&self) -> Option<Symbol> {
        if self.is_proper() {
            self.entries.keys().next().copied()
        } else {
            None
        }
    }

    pub fn multiplicity(&self, sym: Symbol) -> i32 {
        self.entries.get(&sym).copied().unwrap_or(0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (Symbol, i32)> + '_ {
        self.entries.iter().map(|(&s, &m)| (s, m))
    }
}

impl fmt::Display for SignedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, m) in &self.entries {
            if *m > 0 && !first {
                write!(f, "+")?;
            } else if *m < 0 {
                write!(f, "-")?;
            }
            write!(f, "{}", s)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// An n x n array of signed cells. Intermediate state when chaining improper
/// 2x2 trades; a committed square is always proper.
#[derive(Clone, Debug)]
pub struct ImproperGrid {
    order: u32,
    cells: Vec<SignedCell>,
}

impl ImproperGrid {
    pub fn from_latin(grid: &LatinGrid) -> Self {
        let n = grid.order();
        let mut cells = Vec::with_capacity((n * n) as usize);
        for r in 1..=n {
            for c in 1..=n {
                cells.push(SignedCell::single(grid.get(r, c)));
            }
        }
        ImproperGrid { order: n, cells }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, row: u32, col: u32) -> &SignedCell {
        &self.cells[((row - 1) * self.order + (col - 1)) as usize]
    }

    pub fn get_mut(&mut self, row: u32, col: u32) -> &mut SignedCell {
        &mut self.cells[((row - 1) * self.order + (col - 1)) as usize]
    }

    /// Applies the improper 2x2 trade on rows {ra, rb}, columns {ca, cb}
    /// exchanging symbols u, v: +v-u at (ra,ca) and (rb,cb), +u-v at the
    /// other two corners. Returns false (leaving the grid unchanged) if any
    /// corner would leave the signed-subset range.
    pub fn apply_rect(&mut self, ra: u32, rb: u32, ca: u32, cb: u32, u: Symbol, v: Symbol) -> bool {
        let snapshot: Vec<(u32, u32, SignedCell)> = [(ra, ca), (ra, cb), (rb, ca), (rb, cb)]
            .iter()
            .map(|&(r, c)| (r, c, self.get(r, c).clone()))
            .collect();
        let ok = self.get_mut(ra, ca).add(v, 1)
            && self.get_mut(ra, ca).add(u, -1)
            && self.get_mut(ra, cb).add(u, 1)
            && self.get_mut(ra, cb).add(v, -1)
            && self.get_mut(rb, ca).add(u, 1)
            && self.get_mut(rb, ca).add(v, -1)
            && self.get_mut(rb, cb).add(v, 1)
            && self.get_mut(rb, cb).add(u, -1);
        if !ok {
            for (r, c, cell) in snapshot {
                *self.get_mut(r, c) = cell;
            }
        }
        ok
    }

    /// Signed sum of `sym` across row `row`.
    pub fn row_sum(&self, row: u32, sym: Symbol) -> i32 {
        (1..=self.order)
            .map(|c| self.get(row, c).multiplicity(sym))
            .sum()
    }

    /// Signed sum of `sym` across column `col`.
    pub fn col_sum(&self, col: u32, sym: Symbol) -> i32 {
        (1..=self.order)
            .map(|r| self.get(r, col).multiplicity(sym))
            .sum()
    }

    /// The defining invariant: each symbol sums to 1 over every row and
    /// every column, and no cell is empty.
    pub fn invariant_holds(&self) -> bool {
        if self.cells.iter().any(|c| c.is_empty()) {
            return false;
        }
        for line in 1..=self.order {
            for s in 1..=self.order as u16 {
                if self.row_sum(line, Symbol(s)) != 1 || self.col_sum(line, Symbol(s)) != 1 {
                    return false;
                }
            }
        }
        true
    }
}

/// Errors from applying a delta to a grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaError {
    /// A before-value disagrees with the grid content at that cell.
    BeforeMismatch {
        cell: CellCoord,
        expected: String,
        found: Symbol,
    },
    /// An after-value is not a single positive symbol.
    ImproperCommit { cell: CellCoord },
}

impl fmt::Display for DeltaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaError::BeforeMismatch {
                cell,
                expected,
                found,
            } => write!(
                f,
                "before-value mismatch at {}: delta expects {}, grid holds {}",
                cell, expected, found
            ),
            DeltaError::ImproperCommit { cell } => {
                write!(f, "improper after-value at {}", cell)
            }
        }
    }
}

impl std::error::Error for DeltaError {}

/// A set of cell changes. Before/after values are signed cells so that
/// improper intermediates can be represented during composition; a delta is
/// committable only when every after-value is proper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeDelta {
    changes: BTreeMap<CellCoord, (SignedCell, SignedCell)>,
}

impl TradeDelta {
    pub fn empty() -> Self {
        TradeDelta {
            changes: BTreeMap::new(),
        }
    }

    pub fn from_changes(changes: BTreeMap<CellCoord, (SignedCell, SignedCell)>) -> Self {
        TradeDelta { changes }
    }

    /// A proper delta given as (cell, before, after) symbol triples.
    pub fn from_symbol_changes(items: impl IntoIterator<Item = (CellCoord, Symbol, Symbol)>) -> Self {
        let changes = items
            .into_iter()
            .map(|(cell, b, a)| (cell, (SignedCell::single(b), SignedCell::single(a))))
            .collect();
        TradeDelta { changes }
    }

    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellCoord> + '_ {
        self.changes.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CellCoord, &SignedCell, &SignedCell)> + '_ {
        self.changes.iter().map(|(&c, (b, a))| (c, b, a))
    }

    pub fn get(&self, cell: CellCoord) -> Option<(&SignedCell, &SignedCell)> {
        self.changes.get(&cell).map(|(b, a)| (b, a))
    }

    pub fn is_committable(&self) -> bool {
        self.changes.values().all(|(_, a)| a.is_proper())
    }

    /// Swap before and after, undoing the delta.
    pub fn reverse(&self) -> TradeDelta {
        TradeDelta {
            changes: self
                .changes
                .iter()
                .map(|(&c, (b, a))| (c, (a.clone(), b.clone())))
                .collect(),
        }
    }

    /// Mirror every cell across the main diagonal.
    pub fn transposed(&self) -> TradeDelta {
        TradeDelta {
            changes: self
                .changes
                .iter()
                .map(|(&c, v)| (c.transposed(), v.clone()))
                .collect(),
        }
    }

    /// Sequential merge: `self` then `later`. Cells touched by both keep
    /// `self`'s before and `later`'s after; intermediate values must agree.
    pub fn merge(&self, later: &TradeDelta) -> Result<TradeDelta, DeltaError> {
        let mut changes = self.changes.clone();
        for (&cell, (b, a)) in &later.changes {
            match changes.get_mut(&cell) {
                Some((_, mid)) => {
                    if mid != b {
                        return Err(DeltaError::BeforeMismatch {
                            cell,
                            expected: b.to_string(),
                            found: mid.as_proper().unwrap_or(Symbol(0)),
                        });
                    }
                    *mid = a.clone();
                }
                None => {
                    changes.insert(cell, (b.clone(), a.clone()));
                }
            }
        }
        // Cells restored to their starting symbol stay in the delta; the
        // disturbance accounting counts them conservatively.
        Ok(TradeDelta { changes })
    }

    /// All symbols mentioned by the delta, before or after.
    pub fn symbols_used(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for (b, a) in self.changes.values() {
            out.extend(b.symbols().map(|(s, _)| s));
            out.extend(a.symbols().map(|(s, _)| s));
        }
        out
    }
}

/// Replaces the delta's cells in `grid`, checking before-values and
/// properness of after-values first. The grid is untouched on error.
pub fn apply_delta(grid: &mut LatinGrid, delta: &TradeDelta) -> Result<(), DeltaError> {
    for (cell, before, after) in delta.iter() {
        let found = grid.get_cell(cell);
        if before.as_proper() != Some(found) {
            return Err(DeltaError::BeforeMismatch {
                cell,
                expected: before.to_string(),
                found,
            });
        }
        if !after.is_proper() {
            return Err(DeltaError::ImproperCommit { cell });
        }
    }
    for (cell, _, after) in delta.iter() {
        grid.set(cell.row, cell.col, after.as_proper().unwrap());
    }
    Ok(())
}

/// A line of the square, as used by overload queries.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Line {
    Row(u32),
    Col(u32),
    Sym(Symbol),
}

/// Tracks every cell ever altered by a trade (or flagged during
/// construction), with per-row/column/symbol tallies. Disturbance is
/// monotone: once a cell is disturbed it stays disturbed even if a later
/// trade restores its content.
#[derive(Clone, Debug)]
pub struct DisturbanceLedger {
    order: u32,
    disturbed: HashSet<CellCoord>,
    row_counts: Vec<u32>,
    col_counts: Vec<u32>,
    sym_counts: Vec<u32>,
    /// Overload threshold d*n; a line is overloaded when its count strictly
    /// exceeds this.
    threshold: f64,
    /// Bound k on the disturbed fraction: |disturbed| <= k * n^2.
    pub disturbed_fraction_bound: f64,
}

impl DisturbanceLedger {
    pub fn new(order: u32, d: f64, disturbed_fraction_bound: f64) -> Self {
        DisturbanceLedger {
            order,
            disturbed: HashSet::new(),
            row_counts: vec![0; order as usize + 1],
            col_counts: vec![0; order as usize + 1],
            sym_counts: vec![0; order as usize + 1],
            threshold: d * order as f64,
            disturbed_fraction_bound,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn disturbed_count(&self) -> usize {
        self.disturbed.len()
    }

    pub fn is_disturbed(&self, cell: CellCoord) -> bool {
        self.disturbed.contains(&cell)
    }

    /// Marks `cells` disturbed. The symbol tally uses each cell's content in
    /// `grid`, which must be the grid state before the disturbing change is
    /// applied; a cell already disturbed is not re-counted.
    pub fn record(&mut self, grid: &LatinGrid, cells: impl IntoIterator<Item = CellCoord>) {
        for cell in cells {
            if self.disturbed.insert(cell) {
                self.row_counts[cell.row as usize] += 1;
                self.col_counts[cell.col as usize] += 1;
                self.sym_counts[grid.get_cell(cell).get() as usize] += 1;
            }
        }
    }

    /// Marks a delta's cells disturbed, tallying symbols from the delta's
    /// before-values.
    pub fn record_delta(&mut self, delta: &TradeDelta) {
        for (cell, before, _) in delta.iter() {
            if self.disturbed.insert(cell) {
                self.row_counts[cell.row as usize] += 1;
                self.col_counts[cell.col as usize] += 1;
                if let Some(s) = before.as_proper() {
                    self.sym_counts[s.get() as usize] += 1;
                }
            }
        }
    }

    pub fn line_count(&self, line: Line) -> u32 {
        match line {
            Line::Row(r) => self.row_counts[r as usize],
            Line::Col(c) => self.col_counts[c as usize],
            Line::Sym(s) => self.sym_counts[s.get() as usize],
        }
    }

    /// Strictly more than d*n disturbed entries on the line.
    pub fn is_overloaded(&self, line: Line) -> bool {
        self.line_count(line) as f64 > self.threshold
    }

    pub fn overloaded_rows(&self) -> usize {
        (1..=self.order)
            .filter(|&r| self.is_overloaded(Line::Row(r)))
            .count()
    }

    pub fn fraction_bound_exceeded(&self) -> bool {
        self.disturbed.len() as f64 > self.disturbed_fraction_bound * (self.order as f64).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq4() -> LatinGrid {
        // The 4x4 square used by the introductory trade example.
        LatinGrid::from_rows(vec![
            vec![1, 2, 3, 4],
            vec![4, 1, 2, 3],
            vec![3, 4, 1, 2],
            vec![2, 3, 4, 1],
        ])
    }

    #[test]
    fn empty_delta_is_identity() {
        let mut g = sq4();
        let before = g.clone();
        apply_delta(&mut g, &TradeDelta::empty()).unwrap();
        assert_eq!(g, before);
    }

    #[test]
    fn four_cell_swap_matches_displayed_result() {
        // Swapping 1 and 3 at the corners of rows {1,3} x cols {1,3}.
        let mut g = sq4();
        let delta = TradeDelta::from_symbol_changes(vec![
            (CellCoord::new(1, 1), Symbol(1), Symbol(3)),
            (CellCoord::new(1, 3), Symbol(3), Symbol(1)),
            (CellCoord::new(3, 1), Symbol(3), Symbol(1)),
            (CellCoord::new(3, 3), Symbol(1), Symbol(3)),
        ]);
        apply_delta(&mut g, &delta).unwrap();
        let m = LatinGrid::from_rows(vec![
            vec![3, 2, 1, 4],
            vec![4, 1, 2, 3],
            vec![1, 4, 3, 2],
            vec![2, 3, 4, 1],
        ]);
        assert_eq!(g, m);
        assert!(crate::verify::is_latin(&g));
    }

    #[test]
    fn before_mismatch_rejected() {
        let mut g = sq4();
        let delta = TradeDelta::from_symbol_changes(vec![(
            CellCoord::new(1, 1),
            Symbol(2),
            Symbol(1),
        )]);
        let err = apply_delta(&mut g, &delta).unwrap_err();
        assert!(matches!(err, DeltaError::BeforeMismatch { .. }));
        assert_eq!(g, sq4());
    }

    #[test]
    fn improper_commit_rejected() {
        let mut g = sq4();
        let mut after = SignedCell::single(Symbol(2));
        after.add(Symbol(3), 1);
        let mut changes = BTreeMap::new();
        changes.insert(
            CellCoord::new(1, 1),
            (SignedCell::single(Symbol(1)), after),
        );
        let err = apply_delta(&mut g, &TradeDelta::from_changes(changes)).unwrap_err();
        assert!(matches!(err, DeltaError::ImproperCommit { .. }));
    }

    #[test]
    fn apply_then_reverse_roundtrips() {
        let mut g = sq4();
        let delta = TradeDelta::from_symbol_changes(vec![
            (CellCoord::new(1, 1), Symbol(1), Symbol(3)),
            (CellCoord::new(1, 3), Symbol(3), Symbol(1)),
            (CellCoord::new(3, 1), Symbol(3), Symbol(1)),
            (CellCoord::new(3, 3), Symbol(1), Symbol(3)),
        ]);
        apply_delta(&mut g, &delta).unwrap();
        apply_delta(&mut g, &delta.reverse()).unwrap();
        assert_eq!(g, sq4());
    }

    #[test]
    fn ledger_record_is_idempotent() {
        let g = sq4();
        let mut ledger = DisturbanceLedger::new(4, 0.5, 1.0);
        ledger.record(&g, [CellCoord::new(1, 1)]);
        ledger.record(&g, [CellCoord::new(1, 1)]);
        assert_eq!(ledger.disturbed_count(), 1);
        assert_eq!(ledger.line_count(Line::Row(1)), 1);
        assert_eq!(ledger.line_count(Line::Col(1)), 1);
        assert_eq!(ledger.line_count(Line::Sym(Symbol(1))), 1);
    }

    #[test]
    fn ledger_row_counts_sum_to_total() {
        // 17 cells across 2 rows of a larger board.
        let g = crate::construct::build_even(10).0;
        let mut ledger = DisturbanceLedger::new(20, 0.5, 1.0);
        let cells: Vec<_> = (1..=9)
            .map(|c| CellCoord::new(1, c))
            .chain((1..=8).map(|c| CellCoord::new(2, c)))
            .collect();
        assert_eq!(cells.len(), 17);
        ledger.record(&g, cells);
        let total: u32 = (1..=20).map(|r| ledger.line_count(Line::Row(r))).sum();
        assert_eq!(total, 17);
    }

    #[test]
    fn overload_uses_strict_inequality() {
        let g = crate::construct::build_even(50).0;
        let mut ledger = DisturbanceLedger::new(100, 0.1, 1.0);
        ledger.record(&g, (1..=10).map(|c| CellCoord::new(1, c)));
        assert!(!ledger.is_overloaded(Line::Row(1)));
        ledger.record(&g, [CellCoord::new(1, 11)]);
        assert!(ledger.is_overloaded(Line::Row(1)));
    }

    #[test]
    fn full_row_overloads_for_d_below_one() {
        let g = sq4();
        let mut ledger = DisturbanceLedger::new(4, 0.9, 1.0);
        ledger.record(&g, (1..=4).map(|c| CellCoord::new(2, c)));
        assert!(ledger.is_overloaded(Line::Row(2)));
    }

    #[test]
    fn fresh_ledger_has_no_overloads() {
        let ledger = DisturbanceLedger::new(8, 0.1, 1.0);
        assert!((1..=8).all(|r| !ledger.is_overloaded(Line::Row(r))));
    }

    #[test]
    fn signed_cell_improper_example() {
        // b + c - a style cell from the improper 2x2 trade.
        let mut cell = SignedCell::single(Symbol(2));
        assert!(cell.add(Symbol(3), 1));
        assert!(cell.add(Symbol(1), -1));
        assert!(!cell.is_proper());
        assert!(cell.add(Symbol(1), 1));
        assert!(cell.add(Symbol(3), -1));
        assert!(cell.is_proper());
        assert_eq!(cell.as_proper(), Some(Symbol(2)));
    }

    #[test]
    fn signed_cell_rejects_double_multiplicity() {
        let mut cell = SignedCell::single(Symbol(2));
        assert!(!cell.add(Symbol(2), 1));
        assert_eq!(cell.as_proper(), Some(Symbol(2)));
    }
}
