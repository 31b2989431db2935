//! Trade engine: swap the contents of two cells in a row (or column) via a
//! proper trade of at most 16 cells, built by chaining improper 2x2 trades
//! through the structure of the constructed square.
//!
//! The search enumerates candidates in seeded-random order and validates
//! each fully instantiated template before returning: every chain is
//! composed symbolically on signed cells and must come out proper. The
//! structural facts (which cells complete which 2x2 subsquares) only steer
//! the enumeration; correctness rests on the validation.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construct::{Half, StructureMap};
use crate::model::{
    CellCoord, DisturbanceLedger, LatinGrid, Line, SignedCell, Symbol, TradeDelta,
};

/// Everything a swap consults: the live grid, its structure, the disturbance
/// ledger, the protected (currently agreeing) cell set, symbols that must
/// not appear in the trade, the overload constant, and the seed.
pub struct SwapContext<'a> {
    pub grid: &'a LatinGrid,
    pub map: &'a StructureMap,
    pub ledger: &'a DisturbanceLedger,
    pub agreement: &'a HashSet<CellCoord>,
    pub forbidden: &'a HashSet<Symbol>,
    pub d: f64,
    pub rng_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TradeError {
    /// The seeded search exhausted its candidates without validating a
    /// template. Callers may retry with a fresh seed.
    NoEligibleTrade,
}

impl fmt::Display for TradeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TradeError::NoEligibleTrade => write!(f, "no eligible trade found"),
        }
    }
}

impl std::error::Error for TradeError {}

/// Returns a proper trade swapping the symbols of (r1,c1) and (r1,c2),
/// touching no other cell of row r1, at most 16 cells overall, no agreement
/// cell, and no forbidden symbol.
pub fn swap_in_row(
    ctx: &SwapContext,
    r1: u32,
    c1: u32,
    c2: u32,
) -> Result<TradeDelta, TradeError> {
    swap_impl(ctx, false, r1, c1, c2)
}

/// Column analogue of `swap_in_row`: swaps (r1,c1) and (r2,c1) within
/// column c1.
pub fn swap_in_column(
    ctx: &SwapContext,
    c1: u32,
    r1: u32,
    r2: u32,
) -> Result<TradeDelta, TradeError> {
    swap_impl(ctx, true, c1, r1, r2)
}

/// Columns of row r1 whose symbol and column are unoverloaded, whose cell is
/// not an agreement cell, and whose symbol is not forbidden.
pub fn eligible_c1(ctx: &SwapContext, r1: u32) -> Vec<u32> {
    let n = ctx.grid.order();
    (1..=n)
        .filter(|&c| {
            let s = ctx.grid.get(r1, c);
            !ctx.ledger.is_overloaded(Line::Sym(s))
                && !ctx.ledger.is_overloaded(Line::Col(c))
                && !ctx.agreement.contains(&CellCoord::new(r1, c))
                && !ctx.forbidden.contains(&s)
        })
        .collect()
}

/// Columns c2 admissible as the second swap target given c1: the symbol s2
/// is fresh and unoverloaded, its cell in column c1 and the cell of s1 in
/// column c2 are undisturbed, unoverloaded rows, and none of the involved
/// cells agree with P.
pub fn eligible_c2(ctx: &SwapContext, r1: u32, c1: u32) -> Vec<u32> {
    let n = ctx.grid.order();
    let s1 = ctx.grid.get(r1, c1);
    // Row index of each symbol within column c1.
    let mut row_in_c1 = vec![0u32; n as usize + 1];
    for r in 1..=n {
        row_in_c1[ctx.grid.get(r, c1).get() as usize] = r;
    }
    (1..=n)
        .filter(|&c| {
            if c == c1 {
                return false;
            }
            let s2 = ctx.grid.get(r1, c);
            if s2 == s1 || ctx.forbidden.contains(&s2) {
                return false;
            }
            if ctx.agreement.contains(&CellCoord::new(r1, c)) {
                return false;
            }
            if ctx.ledger.is_overloaded(Line::Sym(s2)) || ctx.ledger.is_overloaded(Line::Col(c)) {
                return false;
            }
            let r3 = row_in_c1[s2.get() as usize];
            let cell3 = CellCoord::new(r3, c1);
            if ctx.ledger.is_disturbed(cell3)
                || ctx.map.is_construction_disturbed(cell3)
                || ctx.ledger.is_overloaded(Line::Row(r3))
                || ctx.agreement.contains(&cell3)
            {
                return false;
            }
            let Some(r4) = ctx.grid.row_of(s1, c) else {
                return false;
            };
            let cell4 = CellCoord::new(r4, c);
            if ctx.ledger.is_disturbed(cell4)
                || ctx.map.is_construction_disturbed(cell4)
                || ctx.ledger.is_overloaded(Line::Row(r4))
                || ctx.agreement.contains(&cell4)
            {
                return false;
            }
            true
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Orientation-aware access
// ---------------------------------------------------------------------------

/// Logical view of the context; with `transposed` set, logical rows are
/// physical columns. All template logic below works in logical coordinates.
struct View<'a> {
    ctx: &'a SwapContext<'a>,
    transposed: bool,
}

impl<'a> View<'a> {
    fn phys(&self, r: u32, c: u32) -> CellCoord {
        if self.transposed {
            CellCoord::new(c, r)
        } else {
            CellCoord::new(r, c)
        }
    }

    fn sym(&self, r: u32, c: u32) -> Symbol {
        self.ctx.grid.get_cell(self.phys(r, c))
    }

    fn order(&self) -> u32 {
        self.ctx.grid.order()
    }

    fn disturbed(&self, r: u32, c: u32) -> bool {
        let cell = self.phys(r, c);
        self.ctx.ledger.is_disturbed(cell) || self.ctx.map.is_construction_disturbed(cell)
    }

    fn agrees(&self, r: u32, c: u32) -> bool {
        self.ctx.agreement.contains(&self.phys(r, c))
    }

    fn row_overloaded(&self, r: u32) -> bool {
        let line = if self.transposed { Line::Col(r) } else { Line::Row(r) };
        self.ctx.ledger.is_overloaded(line)
    }

    fn col_overloaded(&self, c: u32) -> bool {
        let line = if self.transposed { Line::Row(c) } else { Line::Col(c) };
        self.ctx.ledger.is_overloaded(line)
    }

    fn sym_overloaded(&self, s: Symbol) -> bool {
        self.ctx.ledger.is_overloaded(Line::Sym(s))
    }

    /// Row currently holding `s` in logical column `c`.
    fn row_of_cur(&self, s: Symbol, c: u32) -> Option<u32> {
        if self.transposed {
            self.ctx.grid.col_of(s, c)
        } else {
            self.ctx.grid.row_of(s, c)
        }
    }

    fn orig_row_of(&self, s: Symbol, c: u32) -> Option<u32> {
        if self.transposed {
            self.ctx.map.original_col_of(s, c)
        } else {
            self.ctx.map.original_row_of(s, c)
        }
    }

    fn orig_col_of(&self, s: Symbol, r: u32) -> Option<u32> {
        if self.transposed {
            self.ctx.map.original_row_of(s, r)
        } else {
            self.ctx.map.original_col_of(s, r)
        }
    }

    fn row_half(&self, r: u32) -> Option<Half> {
        self.ctx.map.row_half(r)
    }

    fn sym_half(&self, s: Symbol) -> Option<Half> {
        self.ctx.map.symbol_half(s)
    }

    fn rows_in_half(&self, h: Half) -> std::ops::RangeInclusive<u32> {
        self.ctx.map.rows_in_half(h)
    }

    fn symbols_in_half(&self, h: Half) -> impl Iterator<Item = Symbol> {
        self.ctx.map.symbols_in_half(h)
    }
}

// ---------------------------------------------------------------------------
// Chain composition
// ---------------------------------------------------------------------------

/// Accumulates a chain of improper 2x2 trades over the live grid, cell by
/// cell, and hands back a proper delta if the chain resolves.
struct Composer<'a, 'b> {
    view: &'b View<'a>,
    cells: std::collections::BTreeMap<(u32, u32), SignedCell>,
}

impl<'a, 'b> Composer<'a, 'b> {
    fn new(view: &'b View<'a>) -> Self {
        Composer {
            view,
            cells: std::collections::BTreeMap::new(),
        }
    }

    fn entry(&mut self, r: u32, c: u32) -> &mut SignedCell {
        let view = &self.view;
        self.cells
            .entry((r, c))
            .or_insert_with(|| SignedCell::single(view.sym(r, c)))
    }

    /// The improper 2x2 trade exchanging u and v over rows {ra,rb} and
    /// columns {ca,cb}: +v-u at (ra,ca),(rb,cb), +u-v at the other corners.
    /// Fails (poisoning the candidate) if a cell would leave the legal
    /// signed-subset range.
    fn rect(&mut self, ra: u32, rb: u32, ca: u32, cb: u32, u: Symbol, v: Symbol) -> bool {
        let steps = [
            (ra, ca, v, u),
            (ra, cb, u, v),
            (rb, ca, u, v),
            (rb, cb, v, u),
        ];
        for (r, c, plus, minus) in steps {
            let cell = self.entry(r, c);
            if !cell.add(plus, 1) || !cell.add(minus, -1) {
                return false;
            }
        }
        true
    }

    /// All cells proper and actually changed: returns (logical cell, before,
    /// after) triples.
    fn finish(self) -> Option<Vec<((u32, u32), Symbol, Symbol)>> {
        let mut out = Vec::with_capacity(self.cells.len());
        for (&(r, c), cell) in &self.cells {
            let after = cell.as_proper()?;
            let before = self.view.sym(r, c);
            if before == after {
                return None;
            }
            out.push(((r, c), before, after));
        }
        Some(out)
    }
}

// ---------------------------------------------------------------------------
// Swap search
// ---------------------------------------------------------------------------

const MAX_TEMPLATE_ATTEMPTS: usize = 400;
const MAX_S6_PER_ROW: usize = 24;

fn swap_impl(
    ctx: &SwapContext,
    transposed: bool,
    row: u32,
    ca: u32,
    cb: u32,
) -> Result<TradeDelta, TradeError> {
    let view = View { ctx, transposed };
    let n = view.order();
    if ca == cb || row < 1 || row > n || ca < 1 || ca > n || cb < 1 || cb > n {
        return Err(TradeError::NoEligibleTrade);
    }
    let sa = view.sym(row, ca);
    let sb = view.sym(row, cb);
    if sa == sb
        || ctx.forbidden.contains(&sa)
        || ctx.forbidden.contains(&sb)
        || view.agrees(row, ca)
        || view.agrees(row, cb)
    {
        return Err(TradeError::NoEligibleTrade);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(mix(ctx.rng_seed, &[row, ca, cb]));

    // The cells holding sb in column ca and sa in column cb anchor every
    // template.
    let r3 = view.row_of_cur(sb, ca).ok_or(TradeError::NoEligibleTrade)?;
    let r4 = view.row_of_cur(sa, cb).ok_or(TradeError::NoEligibleTrade)?;

    // Direct shortcut: the four cells already form a 2x2 subsquare.
    if r3 == r4 && view.sym(r3, cb) == sa && !view.disturbed(r3, ca) && !view.disturbed(r3, cb) {
        if let Some(delta) = finish_candidate(&view, {
            let mut comp = Composer::new(&view);
            comp.rect(row, r3, ca, cb, sa, sb);
            comp
        }) {
            return Ok(delta);
        }
    }

    if view.disturbed(r3, ca)
        || view.disturbed(r4, cb)
        || view.agrees(r3, ca)
        || view.agrees(r4, cb)
        || view.row_overloaded(r3)
        || view.row_overloaded(r4)
    {
        return Err(TradeError::NoEligibleTrade);
    }
    let (Some(h3), Some(h4)) = (view.row_half(r3), view.row_half(r4)) else {
        return Err(TradeError::NoEligibleTrade);
    };

    let mut attempts = 0usize;
    if h3 == h4 {
        // Both anchors in one half: pick r2 from the other and close both
        // sides through guaranteed 2x2 subsquares.
        let mut candidates: Vec<u32> = view
            .rows_in_half(h3.opposite())
            .filter(|&r| r != row)
            .collect();
        candidates.shuffle(&mut rng);
        for r2 in candidates {
            attempts += 1;
            if attempts > MAX_TEMPLATE_ATTEMPTS {
                break;
            }
            if let Some(delta) = try_same_half(&view, row, ca, cb, sa, sb, r3, r4, r2) {
                return Ok(delta);
            }
        }
    } else {
        // Anchors in different halves: one side closes directly, the other
        // routes through an extra symbol s6 from the opposite half.
        let mut candidates: Vec<u32> = (1..=ctx.map.base_order())
            .filter(|&r| r != row && r != r3 && r != r4)
            .collect();
        candidates.shuffle(&mut rng);
        'outer: for r2 in candidates {
            if view.row_overloaded(r2) {
                continue;
            }
            let h2 = match view.row_half(r2) {
                Some(h) => h,
                None => continue,
            };
            let cross_on_first_side = h2 == h3;
            // Anchor symbols of the side that needs the s6 tail sit in one
            // symbol half; s6 comes from the other.
            let tail_sym = if cross_on_first_side { sb } else { sa };
            let Some(tail_half) = view.sym_half(tail_sym) else {
                continue;
            };
            let mut sixes: Vec<Symbol> = view
                .symbols_in_half(tail_half.opposite())
                .filter(|&s| {
                    s != sa && s != sb && !ctx.forbidden.contains(&s) && !view.sym_overloaded(s)
                })
                .collect();
            sixes.shuffle(&mut rng);
            for s6 in sixes.into_iter().take(MAX_S6_PER_ROW) {
                attempts += 1;
                if attempts > MAX_TEMPLATE_ATTEMPTS {
                    break 'outer;
                }
                let got = if cross_on_first_side {
                    try_cross(&view, row, ca, cb, sa, sb, r3, r4, r2, s6)
                } else {
                    // Mirrored roles: the second side carries the tail.
                    try_cross(&view, row, cb, ca, sb, sa, r4, r3, r2, s6)
                };
                if let Some(delta) = got {
                    return Ok(delta);
                }
            }
        }
    }
    Err(TradeError::NoEligibleTrade)
}

/// Both anchor rows in one half, r2 in the other: 12-cell template
///   A: swap sa/sb over rows {row,r2} x cols {ca,cb}
///   B: close column ca through (r3,ca) and the subsquare at column c4
///   C: close column cb through (r4,cb) and the subsquare at column c3
#[allow(clippy::too_many_arguments)]
fn try_same_half(
    view: &View,
    row: u32,
    ca: u32,
    cb: u32,
    sa: Symbol,
    sb: Symbol,
    r3: u32,
    r4: u32,
    r2: u32,
) -> Option<TradeDelta> {
    let s3 = view.sym(r2, ca);
    let s4 = view.sym(r2, cb);
    let c4 = view.orig_col_of(sb, r2)?;
    let c3 = view.orig_col_of(sa, r2)?;
    let need = [
        (r2, ca, s3),
        (r2, cb, s4),
        (r2, c4, sb),
        (r2, c3, sa),
        (r3, c4, s3),
        (r4, c3, s4),
    ];
    for (r, c, s) in need {
        if view.disturbed(r, c) || view.sym(r, c) != s {
            return None;
        }
    }
    let mut comp = Composer::new(view);
    let ok = comp.rect(row, r2, ca, cb, sa, sb)
        && comp.rect(r3, r2, ca, c4, sb, s3)
        && comp.rect(r4, r2, cb, c3, sa, s4);
    if !ok {
        return None;
    }
    finish_candidate(view, comp)
}

/// Anchor rows in different halves, r2 sharing a half with r3: 16-cell
/// template. The cb side closes as in the same-half case; the ca side runs
/// the s6 tail (host swap into the opposite half, then close).
#[allow(clippy::too_many_arguments)]
fn try_cross(
    view: &View,
    row: u32,
    ca: u32,
    cb: u32,
    sa: Symbol,
    sb: Symbol,
    r3: u32,
    r4: u32,
    r2: u32,
    s6: Symbol,
) -> Option<TradeDelta> {
    let s3 = view.sym(r2, ca);
    let s4 = view.sym(r2, cb);
    if s6 == s3 || s6 == s4 {
        return None;
    }
    let c3 = view.orig_col_of(sa, r2)?;
    let c4 = view.orig_col_of(sb, r2)?;
    let s5 = view.sym(r3, c4);
    if s6 == s5 {
        return None;
    }
    let u1 = view.orig_row_of(s6, ca)?;
    let c5 = view.orig_col_of(s6, r2)?;
    let r6 = view.orig_row_of(s6, c4)?;
    let c6 = view.orig_col_of(s6, r3)?;
    if u1 == row || u1 == r4 || r6 == row || r6 == r4 || c6 == cb || c6 == c3 {
        return None;
    }
    if view.col_overloaded(c4) {
        return None;
    }
    let need = [
        (r2, ca, s3),
        (r2, cb, s4),
        (r2, c3, sa),
        (r2, c4, sb),
        (r2, c5, s6),
        (r3, c4, s5),
        (r3, c6, s6),
        (r4, c3, s4),
        (u1, ca, s6),
        (u1, c5, s3),
        (r6, c4, s6),
        (r6, c6, s5),
    ];
    for (r, c, s) in need {
        if view.disturbed(r, c) || view.sym(r, c) != s {
            return None;
        }
    }
    let mut comp = Composer::new(view);
    let ok = comp.rect(row, r2, ca, cb, sa, sb)
        && comp.rect(r4, r2, cb, c3, sa, s4)
        && comp.rect(u1, r2, ca, c5, s6, s3)
        && comp.rect(r3, r2, ca, c4, sb, s6)
        && comp.rect(r6, r3, c4, c6, s6, s5);
    if !ok {
        return None;
    }
    finish_candidate(view, comp)
}

/// Final gate for a composed candidate: proper everywhere, at most 16
/// cells, no agreement cell, no forbidden symbol, and row discipline.
fn finish_candidate(view: &View, comp: Composer) -> Option<TradeDelta> {
    let triples = comp.finish()?;
    if triples.len() > 16 {
        return None;
    }
    for &((r, c), before, after) in &triples {
        if view.agrees(r, c) {
            return None;
        }
        if view.ctx.forbidden.contains(&before) || view.ctx.forbidden.contains(&after) {
            return None;
        }
    }
    Some(TradeDelta::from_symbol_changes(triples.into_iter().map(
        |((r, c), b, a)| (view.phys(r, c), b, a),
    )))
}

/// splitmix64-style seed mixer for reproducible per-call RNG streams.
pub(crate) fn mix(seed: u64, parts: &[u32]) -> u64 {
    let mut x = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        x = x.wrapping_add(p as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x ^= x >> 30;
        x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^= x >> 31;
    }
    x
}
