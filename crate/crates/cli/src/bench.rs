//! Desk-scale benchmark harness: seeded random monic products, factored and
//! verified trial by trial.

use crate::report::{BenchReport, BenchTrialReport};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use nullstelle::num::derive_seed;
use nullstelle::poly::{exact_product, squarefree_probe, Monomial, RationalPolynomial};
use nullstelle::{factorize, FactorConfig};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_core::RngCore;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub nvars: usize,
    pub nfactors: usize,
    pub factor_degree: u32,
    pub denom_max: u64,
    pub trials: u64,
    pub workers: usize,
    pub seed: u64,
    pub timeout: Duration,
}

fn rand_below(rng: &mut dyn RngCore, n: u64) -> u64 {
    rng.next_u64() % n.max(1)
}

/// A random monomial with the given total degree.
fn random_monomial(rng: &mut dyn RngCore, nvars: usize, degree: u32) -> Monomial {
    let mut exps = vec![0u32; nvars];
    for _ in 0..degree {
        let i = rand_below(rng, nvars as u64) as usize;
        exps[i] += 1;
    }
    Monomial(exps)
}

/// A random monic factor: graded-lex-leading coefficient 1, a few extra
/// terms with denominators at most `denom_max`.
pub fn random_monic_factor(
    rng: &mut dyn RngCore,
    nvars: usize,
    degree: u32,
    denom_max: u64,
) -> RationalPolynomial {
    loop {
        let mut terms: Vec<Monomial> = vec![random_monomial(rng, nvars, degree)];
        let extra = 2 + rand_below(rng, 3) as usize;
        for _ in 0..extra {
            let d = rand_below(rng, degree as u64 + 1) as u32;
            terms.push(random_monomial(rng, nvars, d));
        }
        terms.sort();
        terms.dedup();
        let lead = terms.pop().unwrap();
        if lead.total_degree() == 0 {
            continue;
        }
        let mut p = RationalPolynomial::zero(nvars);
        p.add_term(lead, RBig::ONE);
        for m in terms {
            let q = 1 + rand_below(rng, denom_max);
            let mut num = rand_below(rng, 13) as i64 - 6;
            if num == 0 {
                num = 1;
            }
            p.add_term(m, RBig::from_parts(IBig::from(num), UBig::from(q)));
        }
        if p.total_degree() == degree && !p.is_constant() {
            return p;
        }
    }
}

/// Distinct monic factors whose product passes the square-free probe under
/// every variable rotation (the last-variable probe is blind to square
/// factors missing that variable, e.g. a shared content monomial).
pub fn random_trial_input(
    rng: &mut ChaCha12Rng,
    spec: &BenchSpec,
) -> (RationalPolynomial, Vec<RationalPolynomial>) {
    'outer: for _ in 0..256 {
        let mut factors = Vec::with_capacity(spec.nfactors);
        for _ in 0..spec.nfactors {
            let f = random_monic_factor(rng, spec.nvars, spec.factor_degree, spec.denom_max);
            if factors.contains(&f) {
                continue 'outer;
            }
            factors.push(f);
        }
        let product = exact_product(&factors).expect("same nvars");
        for pivot in 0..spec.nvars {
            let mut perm: Vec<usize> = (0..spec.nvars).collect();
            perm.swap(pivot, spec.nvars - 1);
            let rotated = product.permute_variables(&perm);
            if rotated.degree_in(spec.nvars - 1) == 0 {
                continue;
            }
            match squarefree_probe(&rotated, rng) {
                Ok(true) => {}
                _ => continue 'outer,
            }
        }
        return (product, factors);
    }
    panic!("could not draw a square-free benchmark input");
}

pub fn run_trial(spec: &BenchSpec, trial: u64) -> BenchTrialReport {
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(spec.seed, trial));
    let (input, factors) = random_trial_input(&mut rng, spec);
    let config = FactorConfig {
        seed: derive_seed(spec.seed, 0x8000_0000 | trial),
        deadline: Some(Instant::now() + spec.timeout),
        ..FactorConfig::default()
    };
    let started = Instant::now();
    let outcome = factorize(&input, &config);
    let time_ms = started.elapsed().as_millis() as u64;
    match outcome {
        Ok(result) => {
            let mut product = RationalPolynomial::constant(input.nvars(), result.unit.clone());
            for p in &result.factors {
                product = &product * p;
            }
            let verified = product == input;
            let success = result.complete && verified && result.factors.len() >= factors.len();
            BenchTrialReport {
                trial,
                success,
                verified_exact: verified,
                complete: result.complete,
                factors_found: result.factors.len(),
                factors_expected: factors.len(),
                time_ms,
                error: None,
            }
        }
        Err(e) => BenchTrialReport {
            trial,
            success: false,
            verified_exact: false,
            complete: false,
            factors_found: 0,
            factors_expected: factors.len(),
            time_ms,
            error: Some(e.to_string()),
        },
    }
}

pub fn run_bench(spec: &BenchSpec) -> BenchReport {
    let total = spec.trials as usize;
    let slots: Mutex<Vec<Option<BenchTrialReport>>> = Mutex::new(vec![None; total]);
    let next = AtomicUsize::new(0);
    let workers = spec.workers.max(1).min(total.max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= total {
                    break;
                }
                let row = run_trial(spec, i as u64);
                slots.lock().unwrap()[i] = Some(row);
            });
        }
    });
    let trials: Vec<BenchTrialReport> = slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("all trials ran"))
        .collect();
    let successes = trials.iter().filter(|t| t.success).count();
    let mut times: Vec<u64> = trials.iter().map(|t| t.time_ms).collect();
    times.sort_unstable();
    let median = if times.is_empty() {
        0
    } else {
        times[times.len() / 2]
    };
    BenchReport {
        success_rate: if total == 0 {
            1.0
        } else {
            successes as f64 / total as f64
        },
        median_time_ms: median,
        trials,
    }
}
