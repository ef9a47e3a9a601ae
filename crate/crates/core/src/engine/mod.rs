//! The factorization pipeline.
//!
//! Per variety branch: grow a candidate monomial set, reconstruct the
//! branch's minimal vanishing polynomial from sampled points, pair with the
//! conjugate branch when the candidate is complex, divide approximately, and
//! on a small residual rationalize the quotient pair and verify the product
//! exactly. Exact factors shrink the exact remainder and the search recurses
//! on it; real non-rational factors are banked and recombined into rational
//! ones at the end by subset products. Every reported result satisfies
//! unit · ∏ factors = input as an exact identity, including incomplete ones
//! (the unsplit remainder is reported as a factor).

mod divide;
mod recombine;

pub use divide::approx_divide;
pub use recombine::{recombine, RecombineOutcome};

use crate::error::{Error, Result};
use crate::interp::{
    build_matrix, control_error, monomial_candidates_capped, reconstruct, uniqueness_check,
    EvaluationMatrix, MonomialSet,
};
use crate::num::{ceil_log2_rbig, cmp_real, derive_seed, pow2, Complex, Ctx, Real, RealExt};
use crate::poly::{squarefree_probe, ApproxPolynomial, Monomial, RationalPolynomial};
use crate::recover::{compute_budget, recover_coefficients, ErrorBudget};
use crate::sample::{
    branch_regular, default_gradient_tol, initial_points, neighborhood, sample_variety,
    NeighborhoodBox, SamplePoint, SampleSet,
};
use dashu_int::UBig;
use dashu_ratio::RBig;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateStatus {
    Complex,
    Real,
    RationalVerified,
}

/// A reconstructed candidate factor, monic, with its provenance.
#[derive(Debug, Clone)]
pub struct CandidateFactor {
    pub poly: ApproxPolynomial,
    pub branch_tags: BTreeSet<usize>,
    pub status: CandidateStatus,
    pub residual: Real,
    pub source_points: Vec<Vec<Complex>>,
    pub monomials: MonomialSet,
}

#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub precision_bits: usize,
    pub denominator_bound: UBig,
    pub residuals: Vec<f64>,
    pub seed: u64,
    pub recombination_trace: Vec<String>,
    pub escalations: u32,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FactorizationResult {
    pub unit: RBig,
    pub factors: Vec<RationalPolynomial>,
    pub complete: bool,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub struct FactorConfig {
    pub seed: u64,
    pub precision_bits: Option<usize>,
    pub denominator_bound: Option<UBig>,
    pub max_factor_degree: Option<u32>,
    pub assume_squarefree: bool,
    pub deadline: Option<Instant>,
}

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            seed: DEFAULT_SEED,
            precision_bits: None,
            denominator_bound: None,
            max_factor_degree: None,
            assume_squarefree: false,
            deadline: None,
        }
    }
}

/// accept when r ≤ max(2^24·roundoff·‖f‖₂, β·‖f‖₂·√#terms)
pub(crate) fn accept_tolerance(f: &RationalPolynomial, budget: &ErrorBudget, ctx: &Ctx) -> Real {
    let norm_sqr = ctx.from_rbig(&f.norm2_sqr());
    let norm = if norm_sqr.is_zero() {
        ctx.zero()
    } else {
        norm_sqr.sqrt()
    };
    let a = &ctx.epsilon_scaled(24) * &norm;
    let terms = ctx.from_i64(f.num_terms() as i64).sqrt();
    let b = &(&ctx.from_rbig(&budget.beta) * &norm) * &terms;
    if cmp_real(&a, &b) == Ordering::Greater {
        a
    } else {
        b
    }
}

pub enum RationalizeOutcome {
    Exact {
        g: RationalPolynomial,
        h: RationalPolynomial,
    },
    RealOnly,
}

/// Case 2 of the per-branch handling: recover rational coefficients for the
/// candidate and its quotient, then check f = g'·h' with exact arithmetic.
/// Any recovery failure or nonzero exact residual certifies the candidate as
/// real-but-not-rational at this bound.
pub fn rationalize_verify(
    f: &RationalPolynomial,
    g: &ApproxPolynomial,
    h: &ApproxPolynomial,
    budget: &ErrorBudget,
) -> RationalizeOutcome {
    let Ok(g_exact) = recover_coefficients(g, &budget.l) else {
        return RationalizeOutcome::RealOnly;
    };
    let Ok(h_exact) = recover_coefficients(h, &budget.l) else {
        return RationalizeOutcome::RealOnly;
    };
    let product = &g_exact * &h_exact;
    if &product == f {
        RationalizeOutcome::Exact {
            g: g_exact,
            h: h_exact,
        }
    } else {
        RationalizeOutcome::RealOnly
    }
}

/// Reconstruct one branch's candidate from already-sampled points. The
/// public entry point works on the sample set's primary branch.
pub fn extract_candidate(
    f: &RationalPolynomial,
    ss: &SampleSet,
    m_deg: u32,
    budget: &ErrorBudget,
    ctx: &Ctx,
) -> Result<CandidateFactor> {
    let (cand, _needed_bits) = extract_from_points(f, &ss.points, m_deg, budget, ctx)?;
    Ok(cand)
}

/// Returns the candidate plus the working precision the control-error budget
/// demands for this monomial set; callers escalate when it exceeds theirs.
fn extract_from_points(
    f: &RationalPolynomial,
    branch_points: &[SamplePoint],
    m_deg: u32,
    budget: &ErrorBudget,
    ctx: &Ctx,
) -> Result<(CandidateFactor, usize)> {
    let dp = f.degree_profile();
    let ms = monomial_candidates_capped(m_deg, &dp.per_variable);
    let m = ms.len();
    if m < 2 {
        return Err(Error::MonomialSetTooSmall);
    }
    let needed = m - 1;
    if branch_points.len() < needed {
        return Err(Error::WrongPointCount {
            m,
            needed,
            got: branch_points.len(),
        });
    }
    // oversample candidates spread across the whole grid (consecutive nodes
    // are nearly collinear and would starve the row selection), then
    // greedily keep a well-conditioned row subset. The greedy runs on
    // centered, column-scaled rows: raw monomial values are dominated by
    // their means on a small box, and volume greed would otherwise starve
    // low-magnitude but rank-critical directions (e.g. pick nine points
    // with two distinct first coordinates, on which a quadratic in that
    // variable vanishes identically).
    let len = branch_points.len();
    let want = 8 * needed;
    let avail: Vec<&SamplePoint> = if len <= want {
        branch_points.iter().collect()
    } else {
        // low-discrepancy subsample; a fixed stride can alias a grid axis
        // and collapse the pool onto few distinct coordinates
        let mut idx: Vec<usize> = (0..want)
            .map(|i| ((i as f64 * 0.618_033_988_749_895).fract() * len as f64) as usize)
            .collect();
        idx.sort_unstable();
        idx.dedup();
        idx.iter().map(|&i| &branch_points[i]).collect()
    };
    let coords: Vec<Vec<Complex>> = avail.iter().map(|p| p.coords.clone()).collect();
    let probe_em = build_matrix_rows(&coords, &ms, ctx)?;
    let picked = crate::interp::select_rows(&equilibrated(&probe_em, ctx), needed, ctx);
    let sel_coords: Vec<Vec<Complex>> = picked.iter().map(|&i| coords[i].clone()).collect();
    let em = build_matrix(&sel_coords, &ms, ctx)?;

    let (eps_req, bits_req) = control_error(&budget.l, m, &em.max_entry, &em.max_diff)?;
    for &i in &picked {
        if cmp_real(&avail[i].residual, &eps_req) == Ordering::Greater {
            // points are not accurate enough for this budget
            return Err(Error::NonConvergence { iterations: 0 });
        }
    }

    let report = uniqueness_check(&em);
    if !report.unique {
        if std::env::var("NS_DEBUG").is_ok() {
            eprintln!("[rk] m={m} ratio={:.3e} pool={}", report.ratio, avail.len());
            for c in sel_coords.iter() {
                let s: Vec<String> = c.iter().map(|z| { let (re, im) = z.to_f64_pair(); format!("{re:.4}{im:+.1e}i") }).collect();
                eprintln!("[rk]   ({})", s.join(", "));
            }
        }
        return Err(Error::RankDeficient);
    }
    let poly = reconstruct(&em)?;
    let beta = ctx.from_rbig(&budget.beta);
    let status = if cmp_real(&poly.max_imag_abs(), &beta) == Ordering::Greater {
        CandidateStatus::Complex
    } else {
        CandidateStatus::Real
    };
    let residual = max_point_residual(&poly, &em);
    Ok((
        CandidateFactor {
            poly,
            branch_tags: BTreeSet::from([branch_points[0].variety_tag]),
            status,
            residual,
            source_points: sel_coords,
            monomials: ms,
        },
        bits_req,
    ))
}

/// Center each column at its mean and scale it to unit max magnitude; rank
/// of any row subset (jointly with the constant column) is preserved, and
/// the selection geometry stops being dominated by column magnitudes.
fn equilibrated(rows: &[Vec<Complex>], ctx: &Ctx) -> Vec<Vec<Complex>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let count = ctx.from_i64(rows.len() as i64);
    let mut out = rows.to_vec();
    for j in 0..ncols {
        let mut mean = Complex::zero(ctx);
        for r in rows {
            mean += &r[j];
        }
        mean = mean.scale(&(ctx.one() / &count));
        let mut maxsq = ctx.zero();
        for r in out.iter_mut() {
            r[j] -= &mean;
            let v = r[j].norm_sqr();
            if cmp_real(&v, &maxsq) == Ordering::Greater {
                maxsq = v;
            }
        }
        if !maxsq.is_zero() {
            let inv = ctx.one() / maxsq.sqrt();
            for r in out.iter_mut() {
                r[j] = r[j].scale(&inv);
            }
        }
    }
    out
}

fn build_matrix_rows(
    coords: &[Vec<Complex>],
    ms: &MonomialSet,
    ctx: &Ctx,
) -> Result<Vec<Vec<Complex>>> {
    let n = ms.nvars();
    let maxe: Vec<u32> = (0..n)
        .map(|i| {
            ms.monomials
                .iter()
                .map(|mo| mo.exponent(i))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut rows = Vec::with_capacity(coords.len());
    for p in coords {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        let powers = crate::poly::power_table(p, &maxe);
        rows.push(
            ms.monomials
                .iter()
                .map(|mo| crate::poly::power_value(mo, &powers, ctx))
                .collect(),
        );
    }
    Ok(rows)
}

fn max_point_residual(poly: &ApproxPolynomial, em: &EvaluationMatrix) -> Real {
    let ctx = em.ctx();
    em.points
        .iter()
        .map(|p| {
            poly.evaluate(p)
                .map(|v| v.abs())
                .unwrap_or_else(|_| ctx.zero())
        })
        .max_by(cmp_real)
        .unwrap_or_else(|| ctx.zero())
}

/// Case 1: rebuild the candidate from the conjugated sample points (they lie
/// on the conjugate branch) and return the realified product g·ḡ.
pub fn pair_conjugate(
    cand: &CandidateFactor,
    seeds: &[SamplePoint],
    budget: &ErrorBudget,
    ctx: &Ctx,
) -> Result<CandidateFactor> {
    assert_eq!(cand.status, CandidateStatus::Complex);
    let conj_coords: Vec<Vec<Complex>> = cand
        .source_points
        .iter()
        .map(|p| p.iter().map(|z| z.conj()).collect())
        .collect();
    let em = build_matrix(&conj_coords, &cand.monomials, ctx)?;
    if !uniqueness_check(&em).unique {
        return Err(Error::ConjugatePairingFailed);
    }
    let conj_poly = reconstruct(&em).map_err(|_| Error::ConjugatePairingFailed)?;
    let product = cand.poly.mul(&conj_poly);
    let max_imag = product.max_imag_abs();
    let beta = ctx.from_rbig(&budget.beta);
    let cap = ctx.from_i64(10) * &beta;
    if cmp_real(&max_imag, &cap) == Ordering::Greater {
        return Err(Error::ConjugatePairingFailed);
    }
    let real = product.realified().make_monic()?;

    // the conjugate branch's tag, when it is among the seeds
    let mut tags = cand.branch_tags.clone();
    if let Some(&primary_tag) = cand.branch_tags.iter().next() {
        if let Some(seed) = seeds.iter().find(|s| s.variety_tag == primary_tag) {
            let conj_value = seed.coords.last().unwrap().conj();
            let best = seeds
                .iter()
                .filter(|s| s.variety_tag != primary_tag)
                .min_by(|a, b| {
                    cmp_real(
                        &(a.coords.last().unwrap() - &conj_value).abs(),
                        &(b.coords.last().unwrap() - &conj_value).abs(),
                    )
                });
            if let Some(conj_seed) = best {
                let d = (conj_seed.coords.last().unwrap() - &conj_value).abs();
                let near = ctx.from_f64(1e-3) * &(ctx.one() + conj_value.abs());
                if cmp_real(&d, &near) != Ordering::Greater {
                    tags.insert(conj_seed.variety_tag);
                }
            }
        }
    }

    Ok(CandidateFactor {
        poly: real,
        branch_tags: tags,
        status: CandidateStatus::Real,
        residual: max_imag,
        source_points: cand.source_points.clone(),
        monomials: cand.monomials.clone(),
    })
}

struct SplitState {
    config: FactorConfig,
    budget: ErrorBudget,
    ctx: Ctx,
    rng: ChaCha12Rng,
    factors: Vec<(RationalPolynomial, f64)>,
    pool: Vec<CandidateFactor>,
    remainder: RationalPolynomial,
    flawless: bool,
    needed_bits: Option<usize>,
    notes: Vec<String>,
}

enum BranchOutcome {
    Exact {
        g: RationalPolynomial,
        h: RationalPolynomial,
        residual: f64,
        tags: BTreeSet<usize>,
    },
    RealOnly(CandidateFactor),
    Nothing,
    /// The control-error budget wants a higher working precision than this
    /// attempt has; the branch is inconclusive.
    NeedPrecision(usize),
}

impl SplitState {
    fn check_deadline(&self) -> Result<()> {
        if let Some(d) = self.config.deadline {
            if Instant::now() > d {
                return Err(Error::Timeout);
            }
        }
        Ok(())
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

/// Factor a square-free polynomial over Q into monic rational factors and a
/// unit, by sampling its complex variety.
pub fn factorize(
    f_input: &RationalPolynomial,
    config: &FactorConfig,
) -> Result<FactorizationResult> {
    if f_input.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f_input.is_constant() {
        return Err(Error::ConstantPolynomial);
    }

    // orient the variables so the main (last) variable occurs
    let n = f_input.nvars();
    let pivot = (0..n)
        .rev()
        .find(|&i| f_input.degree_in(i) > 0)
        .expect("nonconstant");
    let mut top_perm: Vec<usize> = (0..n).collect();
    top_perm.swap(pivot, n - 1);
    let f_oriented = f_input.permute_variables(&top_perm);

    if !config.assume_squarefree {
        let mut ok = false;
        for attempt in 0..3 {
            let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(config.seed, 0x5f5f + attempt));
            if squarefree_probe(&f_oriented, &mut rng)? {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NotSquareFree);
        }
    }

    let (unit, f_monic) = f_oriented.make_monic()?;
    let l_bound = match &config.denominator_bound {
        Some(l) => l.clone().max(UBig::from(2u8)),
        None => f_monic.lcm_denominators()?.max(UBig::from(2u8)),
    };
    let budget = compute_budget(&l_bound)?;

    let beta_bits = ceil_log2_rbig(&(RBig::ONE / budget.beta.clone())).max(0) as usize;
    let mut precision = config
        .precision_bits
        .unwrap_or_else(|| (beta_bits + 96).max(128));

    let mut escalations = 0u32;
    let mut attempt_log: Vec<String> = Vec::new();
    loop {
        let ctx = Ctx::new(precision);
        let mut budget_run = budget.clone();
        budget_run.eps = Some(sampling_tolerance(&f_monic, &ctx));
        let mut state = SplitState {
            config: config.clone(),
            budget: budget_run,
            ctx,
            rng: ChaCha12Rng::seed_from_u64(derive_seed(config.seed, 0x1000 + escalations as u64)),
            factors: Vec::new(),
            pool: Vec::new(),
            remainder: RationalPolynomial::one(n),
            flawless: true,
            needed_bits: None,
            notes: Vec::new(),
        };
        split(&mut state, f_monic.clone(), 0)?;

        // recombination of banked real factors against the exact remainder
        let pool = std::mem::take(&mut state.pool);
        let outcome = recombine(pool, state.remainder.clone(), &state.budget, &state.ctx);
        state.remainder = outcome.remainder;
        for (g, r) in outcome.rational {
            state.factors.push((g, r));
        }
        state.pool = outcome.leftover;
        if !outcome.enumerated {
            state.flawless = false;
            state.note("recombination pool exceeded enumeration cap".into());
        }

        // a trivial remainder with an empty pool means every factor was
        // verified by the exact identity: no note or precision demand can
        // retract that
        let done = state.pool.is_empty() && (state.flawless || state.remainder.is_constant());
        if done || escalations == 2 {
            let trace = outcome.trace;
            let mut log = attempt_log;
            log.append(&mut state.notes);
            state.notes = log;
            return Ok(finish(f_input, &top_perm, unit, state, trace, escalations));
        }
        for n in state.notes.drain(..) {
            attempt_log.push(format!(
                "attempt {escalations} ({} bits): {n}",
                state.ctx.bits()
            ));
        }
        if let Some(b) = state.needed_bits {
            attempt_log.push(format!("attempt {escalations}: precision raised to {b}"));
        }
        precision = state
            .needed_bits
            .unwrap_or(precision * 2)
            .max(precision * 2);
        escalations += 1;
    }
}

fn finish(
    f_input: &RationalPolynomial,
    top_perm: &[usize],
    unit: RBig,
    state: SplitState,
    trace: Vec<String>,
    escalations: u32,
) -> FactorizationResult {
    let mut factors: Vec<(RationalPolynomial, f64)> = state.factors;
    if !state.remainder.is_constant() {
        factors.push((state.remainder.clone(), 0.0));
    }
    let mut complete = state.pool.is_empty() && (state.flawless || state.remainder.is_constant());
    let mut notes = state.notes;

    // undo the top-level variable orientation; permuting can move the
    // graded-lex leading term, so re-normalize monic and fold the scalars
    // into the unit
    let mut unit = unit;
    let factors: Vec<(RationalPolynomial, f64)> = factors
        .into_iter()
        .map(|(p, r)| {
            let q = p.permute_variables(top_perm);
            let (u, q) = q.make_monic().expect("factors are nonzero");
            unit *= u;
            (q, r)
        })
        .collect();

    // the exact identity is the contract; a violation would be a bug, so it
    // is checked rather than assumed
    let mut product = RationalPolynomial::constant(f_input.nvars(), unit.clone());
    for (p, _) in &factors {
        product = &product * p;
    }
    if &product != f_input {
        complete = false;
        notes.push("exact product identity failed".into());
    }

    let mut factors = factors;
    factors.sort_by(|a, b| cmp_polys(&a.0, &b.0));
    let residuals: Vec<f64> = factors.iter().map(|(_, r)| *r).collect();
    let factors: Vec<RationalPolynomial> = factors.into_iter().map(|(p, _)| p).collect();

    FactorizationResult {
        unit,
        factors,
        complete,
        diagnostics: Diagnostics {
            precision_bits: state.ctx.bits(),
            denominator_bound: state.budget.l.clone(),
            residuals,
            seed: state.config.seed,
            recombination_trace: trace,
            escalations,
            notes,
        },
    }
}

/// Coefficientwise closeness of two approximate polynomials.
fn approx_close(a: &ApproxPolynomial, b: &ApproxPolynomial, tol: &Real) -> bool {
    if a.nvars() != b.nvars() || a.num_terms() != b.num_terms() {
        return false;
    }
    for (m, ca) in a.terms() {
        let Some(cb) = b.coefficient(m) else {
            return false;
        };
        if cmp_real(&(ca - cb).abs(), tol) == Ordering::Greater {
            return false;
        }
    }
    true
}

/// Retire every seed whose branch lies on the variety of an accepted exact
/// factor.
fn consume_covered_branches(
    g: &RationalPolynomial,
    seeds: &[SamplePoint],
    consumed: &mut BTreeSet<usize>,
    ctx: &Ctx,
) -> Result<()> {
    let tol = ctx.epsilon_scaled(ctx.bits() as i64 / 2);
    for s in seeds {
        if consumed.contains(&s.variety_tag) {
            continue;
        }
        let v = g.evaluate(&s.coords, ctx)?.abs();
        if cmp_real(&v, &tol) != Ordering::Greater {
            consumed.insert(s.variety_tag);
        }
    }
    Ok(())
}

fn consume_covered_branches_approx(
    g: &ApproxPolynomial,
    seeds: &[SamplePoint],
    consumed: &mut BTreeSet<usize>,
) -> Result<()> {
    let ctx = g.ctx();
    let tol = ctx.epsilon_scaled(ctx.bits() as i64 / 2);
    for s in seeds {
        if consumed.contains(&s.variety_tag) {
            continue;
        }
        let v = g.evaluate(&s.coords)?.abs();
        if cmp_real(&v, &tol) != Ordering::Greater {
            consumed.insert(s.variety_tag);
        }
    }
    Ok(())
}

/// Deterministic value order on polynomials: total degree, then coefficient
/// comparison monomial-by-monomial from the top.
fn cmp_polys(a: &RationalPolynomial, b: &RationalPolynomial) -> Ordering {
    a.total_degree().cmp(&b.total_degree()).then_with(|| {
        let mut keys: Vec<&Monomial> = a.terms().map(|(m, _)| m).collect();
        keys.extend(b.terms().map(|(m, _)| m));
        keys.sort();
        keys.dedup();
        for m in keys.iter().rev() {
            let ca = a.coefficient(m);
            let cb = b.coefficient(m);
            let ord = ca.cmp(&cb);
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    })
}

/// Residual target for sampled points: roundoff scaled by the coefficient
/// norm and the evaluation growth of degree-d monomials on the unit-ish box.
fn sampling_tolerance(f: &RationalPolynomial, ctx: &Ctx) -> Real {
    let norm_bits = ceil_log2_rbig(&(f.norm2_sqr() + RBig::ONE)) / 2;
    let d = f.total_degree() as i64;
    pow2(48 + norm_bits + 2 * d - ctx.bits() as i64, ctx.bits())
}

fn split(state: &mut SplitState, f_cur: RationalPolynomial, depth: usize) -> Result<()> {
    state.check_deadline()?;
    if f_cur.is_constant() {
        return Ok(());
    }
    if f_cur.total_degree() == 1 {
        state.factors.push((f_cur, 0.0));
        return Ok(());
    }
    if depth > 64 {
        state.flawless = false;
        state.note("recursion depth cap".into());
        state.remainder = &state.remainder * &f_cur;
        return Ok(());
    }
    let n = f_cur.nvars();
    if f_cur.degree_in(n - 1) == 0 {
        // the main variable is absent: swap in one that occurs and recurse
        let pivot = (0..n).rev().find(|&i| f_cur.degree_in(i) > 0).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(pivot, n - 1);
        let rotated = f_cur.permute_variables(&perm);
        let before_f = state.factors.len();
        let before_p = state.pool.len();
        let saved_remainder = std::mem::replace(&mut state.remainder, RationalPolynomial::one(n));
        split(state, rotated, depth + 1)?;
        for (p, _) in &mut state.factors[before_f..] {
            *p = p.permute_variables(&perm);
        }
        for c in &mut state.pool[before_p..] {
            c.poly = permute_approx(&c.poly, &perm);
        }
        let sub_remainder = std::mem::replace(&mut state.remainder, saved_remainder);
        let sub_remainder = sub_remainder.permute_variables(&perm);
        state.remainder = &state.remainder * &sub_remainder;
        return Ok(());
    }

    split_core(state, f_cur, depth)
}

fn permute_approx(p: &ApproxPolynomial, perm: &[usize]) -> ApproxPolynomial {
    ApproxPolynomial::from_terms(
        p.nvars(),
        p.precision_bits(),
        p.terms().map(|(m, c)| (m.permuted(perm), c.clone())),
    )
}

fn split_core(state: &mut SplitState, f_cur: RationalPolynomial, depth: usize) -> Result<()> {
    let ctx = state.ctx;
    let tol = default_gradient_tol(&ctx);

    let seeds = match initial_points(&f_cur, &mut state.rng, &state.budget, &ctx) {
        Ok(s) => s,
        Err(Error::Timeout) => return Err(Error::Timeout),
        Err(e) => {
            state.flawless = false;
            state.note(format!("seeding failed: {e}"));
            state.remainder = &state.remainder * &f_cur;
            return Ok(());
        }
    };
    let mut regular = Vec::new();
    for s in &seeds {
        if branch_regular(&f_cur, s, &tol, &ctx)? {
            regular.push(s.variety_tag);
        }
    }
    if regular.is_empty() {
        state.flawless = false;
        state.note("no regular branch".into());
        state.remainder = &state.remainder * &f_cur;
        return Ok(());
    }
    if regular.len() < seeds.len() {
        state.note(format!(
            "{} of {} branches skipped as non-regular",
            seeds.len() - regular.len(),
            seeds.len()
        ));
        state.flawless = false;
    }

    let primary = seeds.iter().find(|s| s.variety_tag == regular[0]).unwrap();
    let mut bounds = match neighborhood(&f_cur, primary, &mut state.rng, &ctx) {
        Ok(b) => b,
        Err(e) => {
            state.flawless = false;
            state.note(format!("neighborhood failed: {e}"));
            state.remainder = &state.remainder * &f_cur;
            return Ok(());
        }
    };

    let dp = f_cur.degree_profile();
    // a denser base grid keeps later refinement (and its re-solves) rare
    let mut refine = if f_cur.nvars() > 1 { 1u32 } else { 0u32 };
    let mut sample = None;
    'sampling: for shrink in 0..8 {
        match sample_variety(&f_cur, &bounds, &seeds, &dp, &state.budget, refine, &ctx) {
            Ok(s) => {
                sample = Some(s);
                break 'sampling;
            }
            Err(Error::BranchAmbiguity { .. }) if shrink < 7 => {
                for w in &mut bounds.half_widths {
                    *w = w.clone() / ctx.from_i64(2);
                }
            }
            Err(Error::NonConvergence { .. }) => {
                state.needed_bits = Some(ctx.bits() * 2);
                state.flawless = false;
                state.note("sampling lost accuracy".into());
                state.remainder = &state.remainder * &f_cur;
                return Ok(());
            }
            Err(Error::Timeout) => return Err(Error::Timeout),
            Err(e) => {
                state.flawless = false;
                state.note(format!("sampling failed: {e}"));
                state.remainder = &state.remainder * &f_cur;
                return Ok(());
            }
        }
    }
    let Some(mut sample) = sample else {
        state.flawless = false;
        state.note("branch ambiguity persisted".into());
        state.remainder = &state.remainder * &f_cur;
        return Ok(());
    };

    let mut f_work = f_cur.clone();
    let mut consumed: BTreeSet<usize> = BTreeSet::new();
    for &tag in &regular {
        state.check_deadline()?;
        if consumed.contains(&tag) || f_work.total_degree() <= 1 {
            continue;
        }
        let branch = BranchContext {
            f_sample: &f_cur,
            sample: &mut sample,
            bounds: &bounds,
            seeds: &seeds,
            dp: &dp,
            tag,
            refine: &mut refine,
        };
        match try_branch(state, &f_work, branch)? {
            BranchOutcome::Exact {
                g,
                h,
                residual,
                tags,
            } => {
                consumed.extend(tags);
                // other roots of the same factor seed sibling branches; they
                // no longer divide the cofactor, so retire them too
                consume_covered_branches(&g, &seeds, &mut consumed, &ctx)?;
                state.factors.push((g, residual));
                f_work = h;
            }
            BranchOutcome::RealOnly(cand) => {
                consumed.extend(cand.branch_tags.iter().copied());
                consume_covered_branches_approx(&cand.poly, &seeds, &mut consumed)?;
                // a recursive split re-seeds the same varieties, so the same
                // real factor can surface twice; a duplicate would strand in
                // the pool after its twin recombines
                let beta = ctx.from_rbig(&state.budget.beta);
                if !state
                    .pool
                    .iter()
                    .any(|p| approx_close(&p.poly, &cand.poly, &beta))
                {
                    state.pool.push(cand);
                }
            }
            BranchOutcome::Nothing => {}
            BranchOutcome::NeedPrecision(bits) => {
                state.needed_bits = Some(state.needed_bits.unwrap_or(0).max(bits));
                state.flawless = false;
            }
        }
    }

    if f_work.total_degree() == 1 {
        state.factors.push((f_work, 0.0));
        return Ok(());
    }
    if f_work.is_constant() {
        return Ok(());
    }
    if f_work != f_cur {
        // progress was made; the exact cofactor is a fresh, smaller problem
        return split(state, f_work, depth + 1);
    }
    // no branch produced anything: f_cur is irreducible at the search bound
    // (or banked entirely into the pool)
    state.remainder = &state.remainder * &f_work;
    Ok(())
}

struct BranchContext<'a> {
    /// The polynomial the grid was sampled on (its variety carries every
    /// branch); resampling must keep using it even as f_work shrinks.
    f_sample: &'a RationalPolynomial,
    sample: &'a mut SampleSet,
    bounds: &'a NeighborhoodBox,
    seeds: &'a [SamplePoint],
    dp: &'a crate::poly::DegreeProfile,
    tag: usize,
    refine: &'a mut u32,
}

fn try_branch(
    state: &mut SplitState,
    f_work: &RationalPolynomial,
    branch: BranchContext<'_>,
) -> Result<BranchOutcome> {
    let BranchContext {
        f_sample,
        sample,
        bounds,
        seeds,
        dp,
        tag,
        refine,
    } = branch;
    let ctx = state.ctx;
    let d = f_work.total_degree();
    let cap = state
        .config
        .max_factor_degree
        .unwrap_or(d.saturating_sub(1))
        .min(d.saturating_sub(1));
    let f_approx = f_work.to_approx(&ctx);
    let accept = accept_tolerance(f_work, &state.budget, &ctx);

    for m_deg in 1..=cap {
        state.check_deadline()?;
        let ms = monomial_candidates_capped(m_deg, &f_work.degree_profile().per_variable);
        let m = ms.len();
        if m < 2 {
            continue;
        }
        let needed = m - 1;

        // make sure the branch holds enough points, refining the grid on
        // demand (univariate inputs have a single node and cannot refine)
        let mut guard = 0;
        while sample.branch(tag).len() < needed && f_work.nvars() > 1 && guard < 7 {
            *refine += 1;
            guard += 1;
            match sample_variety(f_sample, bounds, seeds, dp, &state.budget, *refine, &ctx) {
                Ok(s) => *sample = s,
                Err(Error::Timeout) => return Err(Error::Timeout),
                Err(e) => {
                    state.note(format!("grid refinement failed: {e}"));
                    break;
                }
            }
        }
        if sample.branch(tag).len() < needed {
            // out of points at this degree; higher degrees need even more
            break;
        }

        let extraction =
            extract_from_points(f_work, sample.branch(tag), m_deg, &state.budget, &ctx);
        if std::env::var("NS_DEBUG").is_ok() {
            eprintln!("[tb] d={d} tag={tag} m_deg={m_deg} pts={} {}", sample.branch(tag).len(),
                match &extraction { Ok((c, b)) => format!("ok status={:?} bits_req={b}", c.status), Err(e) => format!("ERR {e}") });
        }
        let (cand, bits_req) = match extraction {
            Ok(v) => v,
            Err(Error::RankDeficient) => {
                // more points may restore uniqueness once; otherwise give up
                // on this branch as degenerate
                continue;
            }
            Err(Error::NonConvergence { .. }) => {
                return Ok(BranchOutcome::NeedPrecision(ctx.bits() * 2));
            }
            Err(Error::Timeout) => return Err(Error::Timeout),
            Err(_) => continue,
        };
        if bits_req > ctx.bits() {
            return Ok(BranchOutcome::NeedPrecision(bits_req));
        }

        let cand = if cand.status == CandidateStatus::Complex {
            match pair_conjugate(&cand, seeds, &state.budget, &ctx) {
                Ok(p) => p,
                Err(Error::Timeout) => return Err(Error::Timeout),
                Err(_) => continue,
            }
        } else {
            cand
        };
        if cand.poly.total_degree() > d {
            continue;
        }

        let Ok((h, r)) = approx_divide(&f_approx, &cand.poly) else {
            continue;
        };
        if std::env::var("NS_DEBUG").is_ok() {
            eprintln!("[tb]   r={:.3e} accept={:.3e} cand={}", r.to_f64().value(), accept.to_f64().value(), cand.poly);
        }
        if cmp_real(&r, &accept) == Ordering::Greater {
            continue;
        }
        match rationalize_verify(f_work, &cand.poly, &h, &state.budget) {
            RationalizeOutcome::Exact { g, h } => {
                return Ok(BranchOutcome::Exact {
                    g,
                    h,
                    residual: r.to_f64().value(),
                    tags: cand.branch_tags.clone(),
                });
            }
            RationalizeOutcome::RealOnly => {
                let mut banked = cand;
                banked.residual = r;
                return Ok(BranchOutcome::RealOnly(banked));
            }
        }
    }
    Ok(BranchOutcome::Nothing)
}
