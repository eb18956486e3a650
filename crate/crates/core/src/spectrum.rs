//! Universal densities of all truncations and dual truncations of an
//! unweighted matroid, read off its principal partition.

use std::fmt;

use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gen;
use crate::matroid::MatroidHandle;
use crate::rational::{self, Rational};
use crate::sfm::{fractional_arboricity, strength};
use crate::subset::SubsetMask;
use crate::universal::{universal_density, DensityVector, PrincipalPartition};
use crate::weights::WeightVector;

/// One entry of `η*_t` as a function of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Const(Rational),
    /// `(t − offset) / den`.
    Affine {
        offset: i64,
        den: u64,
    },
}

impl Cell {
    pub fn eval(&self, t: usize) -> Rational {
        match self {
            Cell::Const(q) => q.clone(),
            Cell::Affine { offset, den } => Rational::new((t as i64 - offset).into(), (*den as i64).into()),
        }
    }

    /// `1 − cell(n − t)` rewritten as a function of `t`.
    fn complement(&self, n: usize) -> Cell {
        match self {
            Cell::Const(q) => Cell::Const(Rational::one() - q),
            Cell::Affine { offset, den } => Cell::Affine { offset: n as i64 - offset - *den as i64, den: *den },
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Const(q) => write!(f, "{}", rational::format(q)),
            Cell::Affine { offset: 0, den } => write!(f, "t/{den}"),
            Cell::Affine { offset, den } if *offset < 0 => write!(f, "(t + {})/{den}", -offset),
            Cell::Affine { offset, den } => write!(f, "(t - {offset})/{den}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoint {
    /// `s_i`.
    pub level: Rational,
    /// `|E_i|`.
    pub size: usize,
    /// `r(E − E_i)`.
    pub outside_rank: usize,
    pub b: usize,
    pub c: usize,
}

#[derive(Clone, Debug)]
pub struct SpectrumTable {
    pub n: usize,
    pub rank: usize,
    pub balancity: usize,
    pub breakpoints: Vec<Breakpoint>,
    /// Breakpoints of the dual (on its non-loops), driving `t > r(M)`.
    pub dual_breakpoints: Vec<Breakpoint>,
    rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumRange {
    pub t_lo: usize,
    pub t_hi: usize,
    pub cells: Vec<Cell>,
}

impl SpectrumTable {
    /// Cells of `η*_t`, `1 ≤ t ≤ n`.
    pub fn cells(&self, t: usize) -> &[Cell] {
        &self.rows[t - 1]
    }

    pub fn density(&self, t: usize) -> DensityVector {
        DensityVector::new(self.cells(t).iter().map(|c| c.eval(t)).collect())
    }

    /// Maximal runs of consecutive `t` sharing every cell formula.
    pub fn ranges(&self) -> Vec<SpectrumRange> {
        let mut out: Vec<SpectrumRange> = Vec::new();
        for t in 1..=self.n {
            match out.last_mut() {
                Some(r) if r.cells == self.rows[t - 1] => r.t_hi = t,
                _ => out.push(SpectrumRange { t_lo: t, t_hi: t, cells: self.rows[t - 1].clone() }),
            }
        }
        out
    }
}

/// `⌊|E| / D(M)⌋` clamped to `[1, r(M)]`.
pub fn balancity(m: &MatroidHandle) -> Result<usize> {
    let (d, _) = fractional_arboricity(m, &WeightVector::ones(m.len()))?;
    let b = rational::floor_int(&(rational::int(m.len() as i64) / d));
    let b: usize = b.try_into().unwrap_or(usize::MAX);
    Ok(b.clamp(1, m.full_rank()))
}

fn breakpoints(m: &MatroidHandle, pp: &PrincipalPartition) -> Vec<Breakpoint> {
    pp.levels
        .iter()
        .zip(&pp.nested_sets)
        .map(|(s, e_i)| {
            let size = e_i.count();
            let outside_rank = m.rank(&e_i.complement());
            let b: usize = rational::floor_int(&(s * rational::int(size as i64))).try_into().expect("small");
            Breakpoint { level: s.clone(), size, outside_rank, b, c: b + outside_rank }
        })
        .collect()
}

/// Rows for `t = 1..=r(M)`.
fn lower_rows(m: &MatroidHandle, eta: &DensityVector, pp: &PrincipalPartition, bps: &[Breakpoint]) -> Vec<Vec<Cell>> {
    let n = m.len();
    let mut rows = Vec::with_capacity(m.full_rank());
    let mut i = 0;
    for t in 1..=m.full_rank() {
        while bps[i].c < t {
            i += 1;
        }
        let e_i = &pp.nested_sets[i];
        let bp = &bps[i];
        rows.push(
            (0..n)
                .map(|e| {
                    if e_i.contains(e) {
                        Cell::Affine { offset: bp.outside_rank as i64, den: bp.size as u64 }
                    } else {
                        Cell::Const(eta[e].clone())
                    }
                })
                .collect(),
        );
    }
    rows
}

pub fn truncation_spectrum(m: &MatroidHandle) -> Result<SpectrumTable> {
    m.ensure_loopless()?;
    let n = m.len();
    let r = m.full_rank();
    let (eta, pp) = universal_density(m, &WeightVector::ones(n))?;
    let bps = breakpoints(m, &pp);
    let mut rows = lower_rows(m, &eta, &pp, &bps);
    let mut dual_breakpoints = Vec::new();
    if r < n {
        let d = m.dual();
        let loops = d.loops().clone();
        let keep: Vec<usize> = loops.complement().to_vec();
        let inner = d.delete(&loops)?;
        let (eta_d, pp_d) = universal_density(&inner, &WeightVector::ones(keep.len()))?;
        dual_breakpoints = breakpoints(&inner, &pp_d);
        let dual_rows = lower_rows(&inner, &eta_d, &pp_d, &dual_breakpoints);
        for t in r + 1..=n {
            let src = &dual_rows[(n - t).max(1) - 1];
            let mut row = vec![Cell::Const(Rational::one()); n];
            for (j, &e) in keep.iter().enumerate() {
                row[e] = src[j].complement(n);
            }
            rows.push(row);
        }
    }
    Ok(SpectrumTable { n, rank: r, balancity: bps[0].b.clamp(1, r), breakpoints: bps, dual_breakpoints, rows })
}

/// `D(M_t) = max |X| / (t − r(M) + r(X))` for `r(M) ≤ t < |E|`.
pub fn dual_truncation_arboricity(m: &MatroidHandle, t: usize) -> Result<Rational> {
    let n = m.len();
    let r = m.full_rank();
    if t < r || t >= n {
        return Err(Error::input(format!("dual truncation level {t} outside [{r}, {})", n)));
    }
    let mt = m.truncation(t)?;
    Ok(fractional_arboricity(&mt, &WeightVector::ones(n))?.0)
}

#[derive(Clone, Debug, Default)]
pub struct SpectrumCheck {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SpectrumCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn distinct(v: &[Rational]) -> usize {
    let mut w = v.to_vec();
    w.sort();
    w.dedup();
    w.len()
}

fn same_rank(a: &MatroidHandle, b: &MatroidHandle, seed: u64) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    if n <= 14 {
        return (0..1u64 << n).all(|bits| {
            let x = SubsetMask::from_bits(n, bits);
            a.rank(&x) == b.rank(&x)
        });
    }
    let mut rng = gen::rng(seed);
    (0..2000).all(|_| {
        let x = SubsetMask::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        a.rank(&x) == b.rank(&x)
    })
}

/// Verify the breakpoint invariants, the monotone sequences, the contraction identity,
/// and every formula row against a direct computation on the truncation handle.
pub fn spectrum_consistency_check(m: &MatroidHandle) -> Result<SpectrumCheck> {
    let table = truncation_spectrum(m)?;
    let n = m.len();
    let r = m.full_rank();
    let ones = WeightVector::ones(n);
    let mut rep = SpectrumCheck::default();
    let bps = &table.breakpoints;

    rep.expect(bps[0].c > 0 && bps.last().map(|b| b.c) == Some(r), || "c_1 > 0 and c_k = r(M)".into());
    for i in 1..bps.len() {
        rep.expect(bps[i - 1].c <= bps[i].c, || format!("c_{} > c_{}", i, i + 1));
        rep.expect(bps[i].outside_rank <= bps[i - 1].c, || format!("r(E − E_{}) > c_{}", i + 1, i));
    }
    if bps.len() > 1 {
        rep.expect(bps[bps.len() - 2].c < r, || "c_{k-1} = r(M)".into());
    }
    let (_, pp) = universal_density(m, &ones)?;
    for (i, e_i) in pp.nested_sets.iter().enumerate() {
        let rest = e_i.complement();
        let minor = if rest.is_empty() { m.clone() } else { m.contract(&rest)? };
        let b = balancity(&minor)?;
        rep.expect(b == bps[i].b, || format!("b_{} = {} but balancity of the minor is {b}", i + 1, bps[i].b));
    }

    let mut prev_blocks = 0;
    for t in 1..=n {
        let eta_t = table.density(t);
        rep.expect(eta_t.total() == rational::int(t as i64), || format!("η*_{t} does not sum to {t}"));
        let direct = universal_density(&m.truncation(t)?, &ones)?.0;
        rep.expect(direct == eta_t, || format!("formula and direct η*_{t} differ"));
        if t <= r {
            let blocks = distinct(&eta_t);
            rep.expect(blocks >= prev_blocks, || format!("block count drops at t = {t}"));
            prev_blocks = blocks;
        }
    }

    let mut last: Option<(Rational, Rational, Rational)> = None;
    for t in 1..=r {
        let mt = m.truncation(t)?;
        let d = fractional_arboricity(&mt, &ones)?.0;
        let s = strength(&mt, &ones)?.0;
        let theta = rational::frac(n as i64, t as i64);
        if let Some((d0, s0, th0)) = &last {
            rep.expect(*d0 >= d, || format!("D(M_{}) < D(M_{t})", t - 1));
            rep.expect(*th0 > theta, || format!("θ(M_{}) ≤ θ(M_{t})", t - 1));
            rep.expect(*s0 > s, || format!("S(M_{}) ≤ S(M_{t})", t - 1));
        }
        last = Some((d, s, theta));
    }

    let core = &pp.blocks[0];
    let rc = m.rank(core);
    if !core.is_full() {
        let mc = m.contract(core)?;
        for t in table.balancity + 1..=r {
            let left = m.truncation(t)?.minor(&SubsetMask::empty(n), core);
            let right = mc.truncation(t - rc);
            let ok = match (left, right) {
                (Ok(a), Ok(b)) => same_rank(&a, &b, t as u64),
                _ => false,
            };
            rep.expect(ok, || format!("(M_{t})/X* differs from (M/X*)_{}", t - rc));
        }
    }
    Ok(rep)
}
