//! Approximate points on one irreducible component of a variety.
//!
//! A random specialization of all variables but the last turns f into a
//! univariate polynomial whose roots seed one branch each. Around a seed
//! where no leading partial derivative vanishes, a box is grown in which the
//! partials keep their sign, a real grid is laid out inside the box, and the
//! root closest to the seed is tracked across grid nodes — staying on the one
//! branch. The remaining roots at every node are kept too: they are sample
//! points for the sibling branches and get filed under their own tags.

mod roots;

pub use roots::univariate_roots;

use crate::error::{Error, Result};
use crate::num::{cmp_real, Complex, Ctx, Real, RealExt};
use crate::poly::{DegreeProfile, RationalPolynomial};
use crate::recover::ErrorBudget;
use dashu_base::Abs;
use rand_core::RngCore;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Approximate variety point with its residual and the branch it belongs to.
#[derive(Debug, Clone)]
pub struct SamplePoint {
    pub coords: Vec<Complex>,
    pub residual: Real,
    pub variety_tag: usize,
}

/// Box around a seed point inside which the leading partial derivatives keep
/// their sign (tested on probes, not proved). Half-widths cover the first
/// n−1 variables.
#[derive(Debug, Clone)]
pub struct NeighborhoodBox {
    pub center: SamplePoint,
    pub half_widths: Vec<Real>,
}

/// Grid samples for one branch plus the sibling roots per node.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub points: Vec<SamplePoint>,
    pub bounds: NeighborhoodBox,
    /// Per-axis grid coordinates whose cartesian product is the node set.
    pub grid: Vec<Vec<Real>>,
    pub siblings: BTreeMap<usize, Vec<SamplePoint>>,
}

impl SampleSet {
    pub fn branch(&self, tag: usize) -> &[SamplePoint] {
        if tag == self.bounds.center.variety_tag {
            &self.points
        } else {
            self.siblings.get(&tag).map(|v| v.as_slice()).unwrap_or(&[])
        }
    }
}

/// True iff every leading partial derivative (all but the last variable) has
/// magnitude above `tol` at the point.
pub fn gradient_check(
    f: &RationalPolynomial,
    p: &SamplePoint,
    tol: &Real,
    ctx: &Ctx,
) -> Result<bool> {
    let n = f.nvars();
    if p.coords.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.coords.len(),
        });
    }
    for i in 0..n.saturating_sub(1) {
        let d = f.partial_derivative(i)?;
        let v = d.evaluate(&p.coords, ctx)?;
        if cmp_real(&v.abs(), tol) != Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Branch admission test: the point must be nonsingular (some partial of f,
/// any variable, is bounded away from zero there), which places it on
/// exactly one irreducible component. The strict all-leading-partials form
/// of [`gradient_check`] would starve branches of factors that miss a
/// variable — there the partial vanishes along the whole branch — so those
/// directions are handled by the flatness probes of [`neighborhood`]
/// instead.
pub fn branch_regular(
    f: &RationalPolynomial,
    p: &SamplePoint,
    tol: &Real,
    ctx: &Ctx,
) -> Result<bool> {
    let n = f.nvars();
    for i in 0..n {
        let d = f.partial_derivative(i)?;
        if d.is_zero() {
            continue;
        }
        let v = d.evaluate(&p.coords, ctx)?;
        if cmp_real(&v.abs(), tol) == Ordering::Greater {
            return Ok(true);
        }
    }
    Ok(false)
}

pub(crate) fn default_gradient_tol(ctx: &Ctx) -> Real {
    ctx.epsilon_scaled(ctx.bits() as i64 / 2)
}

const INITIAL_RETRY_CAP: usize = 12;

/// Draw the first n−1 coordinates uniformly from [1, 2], solve for the last
/// variable, and return every root as a seed point with its own branch tag.
/// Redraws when no root passes the regularity check.
pub fn initial_points(
    f: &RationalPolynomial,
    rng: &mut dyn RngCore,
    budget: &ErrorBudget,
    ctx: &Ctx,
) -> Result<Vec<SamplePoint>> {
    let n = f.nvars();
    if f.degree_in(n - 1) == 0 {
        return Err(Error::ConstantInLastVariable);
    }
    let eps = residual_target(budget, ctx);
    let tol = default_gradient_tol(ctx);
    for _ in 0..INITIAL_RETRY_CAP {
        let base: Vec<Complex> = (0..n - 1)
            .map(|_| Complex::from_real(ctx.random_unit_interval(rng)))
            .collect();
        let coeffs = f.specialize_prefix(&base, ctx);
        let eps_rel = relative_eps(&eps, &coeffs, ctx);
        let roots = match univariate_roots(&coeffs, &eps_rel, ctx) {
            Ok(r) => r,
            Err(Error::NonConvergence { .. }) => continue,
            Err(e) => return Err(e),
        };
        let roots = collapse_coincident(roots, &eps, ctx);
        let mut points = Vec::with_capacity(roots.len());
        for (tag, root) in roots.into_iter().enumerate() {
            let mut coords = base.clone();
            coords.push(root);
            let residual = f.evaluate(&coords, ctx)?.abs();
            points.push(SamplePoint {
                coords,
                residual,
                variety_tag: tag,
            });
        }
        if points
            .iter()
            .any(|p| cmp_real(&p.residual, &eps) == Ordering::Greater)
        {
            continue;
        }
        let mut any_regular = false;
        for p in &points {
            if branch_regular(f, p, &tol, ctx)? {
                any_regular = true;
                break;
            }
        }
        if any_regular {
            return Ok(points);
        }
    }
    Err(Error::NoRegularPoint {
        attempts: INITIAL_RETRY_CAP,
    })
}

/// Sort deterministically and merge roots that coincide within eps.
fn collapse_coincident(mut roots: Vec<Complex>, eps: &Real, ctx: &Ctx) -> Vec<Complex> {
    roots.sort_by(|a, b| cmp_real(&a.re, &b.re).then_with(|| cmp_real(&a.im, &b.im)));
    let mut out: Vec<Complex> = Vec::with_capacity(roots.len());
    for r in roots {
        if let Some(last) = out.last() {
            if cmp_real(&(&r - last).abs(), eps) != Ordering::Greater {
                continue;
            }
        }
        out.push(r);
    }
    let _ = ctx;
    out
}

const HALVING_CAP: usize = 40;
const PROBE_COUNT: usize = 32;

/// Grow a box around p0 in which the sign of the real part of every leading
/// partial matches its sign at p0, on 32 random probes plus all box corners;
/// start from h_i = 0.1·(1+|x_i|) and halve until the probe passes.
pub fn neighborhood(
    f: &RationalPolynomial,
    p0: &SamplePoint,
    rng: &mut dyn RngCore,
    ctx: &Ctx,
) -> Result<NeighborhoodBox> {
    let n = f.nvars();
    if n == 1 {
        return Ok(NeighborhoodBox {
            center: p0.clone(),
            half_widths: Vec::new(),
        });
    }
    let partials: Vec<RationalPolynomial> = (0..n - 1)
        .map(|i| f.partial_derivative(i))
        .collect::<Result<_>>()?;
    let tol = default_gradient_tol(ctx);
    // a partial with magnitude above tol at the seed must keep its sign on
    // the box; one at/below tol (vanishing along the branch, e.g. a factor
    // missing that variable) must stay flat instead
    let mut modes: Vec<AxisMode> = Vec::with_capacity(n - 1);
    for (i, d) in partials.iter().enumerate() {
        let _ = i;
        if d.is_zero() {
            modes.push(AxisMode::Skip);
            continue;
        }
        let v = d.evaluate(&p0.coords, ctx)?;
        if cmp_real(&v.abs(), &tol) == Ordering::Greater {
            modes.push(AxisMode::Sign(cmp_real(&v.re, &ctx.zero())));
        } else {
            modes.push(AxisMode::Flat);
        }
    }

    let mut widths: Vec<Real> = (0..n - 1)
        .map(|i| {
            let mag = p0.coords[i].abs();
            (ctx.one() + mag) * ctx.from_f64(0.1)
        })
        .collect();

    'halving: for _ in 0..=HALVING_CAP {
        let mut ok = true;
        // corners first (real parts), then random probes
        let corner_count = 1usize << (n - 1).min(12);
        for c in 0..corner_count {
            let probe: Vec<Complex> = (0..n - 1)
                .map(|i| {
                    let delta = if (c >> i) & 1 == 1 {
                        widths[i].clone()
                    } else {
                        -widths[i].clone()
                    };
                    Complex::from_real(p0.coords[i].re.clone() + delta)
                })
                .collect();
            if !probe_signs_match(f, &partials, &modes, &tol, &probe, p0, ctx)? {
                ok = false;
                break;
            }
        }
        if ok {
            for _ in 0..PROBE_COUNT {
                let probe: Vec<Complex> = (0..n - 1)
                    .map(|i| {
                        // uniform in [x_i - h_i, x_i + h_i]
                        let u = ctx.random_unit_interval(rng); // [1, 2)
                        let t = (u - ctx.one()) * ctx.from_i64(2) - ctx.one(); // [-1, 1)
                        Complex::from_real(p0.coords[i].re.clone() + &t * &widths[i])
                    })
                    .collect();
                if !probe_signs_match(f, &partials, &modes, &tol, &probe, p0, ctx)? {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(NeighborhoodBox {
                center: p0.clone(),
                half_widths: widths,
            });
        }
        for w in &mut widths {
            *w = w.clone() / ctx.from_i64(2);
        }
        continue 'halving;
    }
    Err(Error::NoStableNeighborhood {
        halvings: HALVING_CAP,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AxisMode {
    /// Partial is identically zero: nothing to check.
    Skip,
    /// Partial is bounded away from zero at the seed: its sign must match.
    Sign(Ordering),
    /// Partial vanishes along the branch: it must stay below tolerance.
    Flat,
}

/// Solve for the last coordinate at the probe base (closest root to the
/// seed), then check every partial's mode there.
fn probe_signs_match(
    f: &RationalPolynomial,
    partials: &[RationalPolynomial],
    modes: &[AxisMode],
    tol: &Real,
    base: &[Complex],
    p0: &SamplePoint,
    ctx: &Ctx,
) -> Result<bool> {
    let coeffs = f.specialize_prefix(base, ctx);
    let eps_rel = ctx.epsilon_scaled(24);
    let roots = match univariate_roots(&coeffs, &eps_rel, ctx) {
        Ok(r) => r,
        Err(Error::NonConvergence { .. }) => return Ok(false),
        Err(Error::ZeroPolynomial) | Err(Error::ConstantPolynomial) => return Ok(false),
        Err(e) => return Err(e),
    };
    let seed_root = p0.coords.last().unwrap();
    let nearest = roots
        .into_iter()
        .min_by(|a, b| cmp_real(&(a - seed_root).abs(), &(b - seed_root).abs()))
        .unwrap();
    let mut full = base.to_vec();
    full.push(nearest);
    for (d, mode) in partials.iter().zip(modes) {
        match mode {
            AxisMode::Skip => {}
            AxisMode::Sign(expect) => {
                let v = d.evaluate(&full, ctx)?;
                let s = cmp_real(&v.re, &ctx.zero());
                if s != *expect || s == Ordering::Equal {
                    return Ok(false);
                }
            }
            AxisMode::Flat => {
                let v = d.evaluate(&full, ctx)?;
                if cmp_real(&v.abs(), tol) == Ordering::Greater {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Equispaced `count` points over [center−h, center+h]; a single point sits
/// at the center.
fn axis_points(center: &Real, h: &Real, count: usize, ctx: &Ctx) -> Vec<Real> {
    if count <= 1 {
        return vec![center.clone()];
    }
    let span = ctx.from_i64(2) * h;
    let step = span / ctx.from_i64(count as i64 - 1);
    (0..count)
        .map(|k| center - h + &step * &ctx.from_i64(k as i64))
        .collect()
}

/// Sample the grid of (d_i+1)·2^refine points per axis inside the box. Roots
/// are tracked by continuation: the grid is walked breadth-first from the
/// node nearest the box center, and each node's roots are matched against
/// the values already assigned at its neighbor (the seed values at the
/// start), so every branch is followed locally across the box. The returned
/// set holds the primary branch; every other seed's points are filed under
/// `siblings`.
pub fn sample_variety(
    f: &RationalPolynomial,
    bounds: &NeighborhoodBox,
    seeds: &[SamplePoint],
    dp: &DegreeProfile,
    budget: &ErrorBudget,
    refine: u32,
    ctx: &Ctx,
) -> Result<SampleSet> {
    let n = f.nvars();
    let eps = residual_target(budget, ctx);
    let grid: Vec<Vec<Real>> = (0..n - 1)
        .map(|i| {
            let base_count = dp.per_variable[i] as usize + 1;
            let count = base_count << refine;
            axis_points(
                &bounds.center.coords[i].re,
                &bounds.half_widths[i],
                count,
                ctx,
            )
        })
        .collect();
    let dims: Vec<usize> = grid.iter().map(|axis| axis.len()).collect();
    let total: usize = dims.iter().product::<usize>().max(1);

    // node nearest the center starts the walk, matched against the seeds
    let start: Vec<usize> = (0..n - 1)
        .map(|i| {
            let c = &bounds.center.coords[i].re;
            (0..dims[i])
                .min_by(|&a, &b| {
                    cmp_real(
                        &(&grid[i][a] - c).clone().abs(),
                        &(&grid[i][b] - c).clone().abs(),
                    )
                })
                .unwrap_or(0)
        })
        .collect();

    let seed_values: Vec<Complex> = seeds
        .iter()
        .map(|s| s.coords.last().unwrap().clone())
        .collect();
    // a branch escaping to infinity inside the box (the leading coefficient
    // of the specialized polynomial vanishing nearby) produces numerically
    // toxic points; roots far beyond their seed's scale mark dead nodes
    let escape_caps: Vec<Real> = seed_values
        .iter()
        .map(|z| ctx.from_i64(8) * &(ctx.one() + z.abs()))
        .collect();
    // per node, per seed-index, the tracked root; ambiguous nodes (the grid
    // crossing the discriminant locus where two branches draw level) are
    // dropped and the walk routes around them
    let mut assigned: Vec<Option<Vec<Complex>>> = vec![None; total];
    let mut order: Vec<usize> = Vec::with_capacity(total);
    let mut queue = std::collections::VecDeque::new();
    let start_lin = linearize(&start, &dims);
    queue.push_back((start_lin, None::<usize>));
    let mut seen = vec![false; total];
    seen[start_lin] = true;
    while let Some((lin, parent)) = queue.pop_front() {
        let node = delinearize(lin, &dims);
        let base: Vec<Complex> = node
            .iter()
            .enumerate()
            .map(|(i, &k)| Complex::from_real(grid[i][k].clone()))
            .collect();
        let coeffs = f.specialize_prefix(&base, ctx);
        let eps_rel = relative_eps(&eps, &coeffs, ctx);
        let targets: &[Complex] = match parent {
            None => &seed_values,
            Some(p) => assigned[p].as_ref().expect("parent processed"),
        };
        let values = match univariate_roots(&coeffs, &eps_rel, ctx) {
            // a root multiset smaller than the branch count means a degree
            // drop at this node (a branch passing through infinity): dead
            Ok(roots) if roots.len() < targets.len() => None,
            // a low-confidence match means a branch crossing inside the box:
            // abort so the caller shrinks away from it
            Ok(roots) => {
                let matched = match_roots(roots, targets, ctx)?;
                let escaped = matched
                    .iter()
                    .zip(&escape_caps)
                    .any(|(z, cap)| cmp_real(&z.abs(), cap) == Ordering::Greater);
                if escaped {
                    None
                } else {
                    Some(matched)
                }
            }
            Err(Error::NonConvergence { .. }) => None,
            Err(e) => return Err(e),
        };
        let Some(values) = values else {
            if parent.is_none() {
                // the center node itself is unusable: the box needs to move
                return Err(Error::NonConvergence { iterations: 0 });
            }
            continue;
        };
        assigned[lin] = Some(values);
        order.push(lin);
        for (axis, &k) in node.iter().enumerate() {
            for nk in [k.wrapping_sub(1), k + 1] {
                if nk >= dims[axis] {
                    continue;
                }
                let mut neighbor = node.clone();
                neighbor[axis] = nk;
                let nlin = linearize(&neighbor, &dims);
                if !seen[nlin] {
                    seen[nlin] = true;
                    queue.push_back((nlin, Some(lin)));
                }
            }
        }
    }

    // a box that loses half its nodes to solver failures is not salvageable
    if order.len() * 2 < total {
        return Err(Error::NonConvergence { iterations: 0 });
    }

    // deterministic point order: linear node index
    order.sort_unstable();
    let mut per_branch: BTreeMap<usize, Vec<SamplePoint>> = BTreeMap::new();
    for s in seeds {
        per_branch.insert(s.variety_tag, Vec::new());
    }
    for lin in order {
        let node = delinearize(lin, &dims);
        let values = assigned[lin].as_ref().unwrap();
        for (seed, root) in seeds.iter().zip(values) {
            let mut coords: Vec<Complex> = node
                .iter()
                .enumerate()
                .map(|(i, &k)| Complex::from_real(grid[i][k].clone()))
                .collect();
            coords.push(root.clone());
            // the invariant on emitted points, re-checked independently
            let residual = f.evaluate(&coords, ctx)?.abs();
            if cmp_real(&residual, &eps) == Ordering::Greater {
                continue;
            }
            per_branch
                .entry(seed.variety_tag)
                .or_default()
                .push(SamplePoint {
                    coords,
                    residual,
                    variety_tag: seed.variety_tag,
                });
        }
    }

    let primary_tag = bounds.center.variety_tag;
    let points = per_branch.remove(&primary_tag).unwrap_or_default();
    Ok(SampleSet {
        points,
        bounds: bounds.clone(),
        grid,
        siblings: per_branch,
    })
}

fn linearize(node: &[usize], dims: &[usize]) -> usize {
    let mut lin = 0;
    for (i, &k) in node.iter().enumerate() {
        lin = lin * dims[i] + k;
    }
    lin
}

fn delinearize(mut lin: usize, dims: &[usize]) -> Vec<usize> {
    let mut node = vec![0usize; dims.len()];
    for i in (0..dims.len()).rev() {
        node[i] = lin % dims[i];
        lin /= dims[i];
    }
    node
}

/// Match each target to its closest unclaimed root (targets in order). A
/// confident match needs the runner-up at least twice as far away; anything
/// tighter risks a silent swap where two branches draw level between nodes,
/// so it is reported as an ambiguity.
fn match_roots(roots: Vec<Complex>, targets: &[Complex], ctx: &Ctx) -> Result<Vec<Complex>> {
    let mut unclaimed: Vec<Option<Complex>> = roots.into_iter().map(Some).collect();
    let mut out = Vec::with_capacity(targets.len());
    for target in targets {
        let mut best: Option<(usize, Real)> = None;
        let mut second: Option<Real> = None;
        for (i, slot) in unclaimed.iter().enumerate() {
            let Some(r) = slot else { continue };
            let d = (r - target).abs();
            match &best {
                None => best = Some((i, d)),
                Some((_, bd)) => {
                    if cmp_real(&d, bd) == Ordering::Less {
                        second = Some(bd.clone());
                        best = Some((i, d));
                    } else {
                        match &second {
                            None => second = Some(d),
                            Some(s) => {
                                if cmp_real(&d, s) == Ordering::Less {
                                    second = Some(d);
                                }
                            }
                        }
                    }
                }
            }
        }
        let Some((idx, d1)) = best else {
            return Err(Error::BranchAmbiguity { ratio: 1.0 });
        };
        if let Some(d2) = &second {
            if !d1.is_zero() {
                let ratio = d2 / &d1;
                if ratio < ctx.from_f64(2.0) {
                    return Err(Error::BranchAmbiguity {
                        ratio: ratio.to_f64().value(),
                    });
                }
            }
        }
        out.push(unclaimed[idx].take().unwrap());
    }
    Ok(out)
}

pub(crate) fn residual_target(budget: &ErrorBudget, ctx: &Ctx) -> Real {
    match &budget.eps {
        Some(e) => e.clone().with_precision(ctx.bits()).value(),
        None => ctx.epsilon_scaled(ctx.bits() as i64 / 4),
    }
}

fn relative_eps(eps_abs: &Real, coeffs: &[Complex], ctx: &Ctx) -> Real {
    let norm = roots::coeff_norm(coeffs, ctx);
    if norm.is_zero() {
        return eps_abs.clone();
    }
    eps_abs / &norm
}
