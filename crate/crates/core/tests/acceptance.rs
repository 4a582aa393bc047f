//! End-to-end acceptance sweep: one PASS/FAIL line per criterion, nonzero exit
//! on any failure. All arithmetic is exact.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use poset_duality::group::AmbientSpace;
use poset_duality::partition::{self, Carrier};
use poset_duality::pi::{Pi, PiParams};
use poset_duality::poset::{default_names, labeled_posets, ElementSet, Poset};
use poset_duality::ring::Rationals;
use poset_duality::scheme;
use poset_duality::survey::{self, SurveyConfig};
use poset_duality::weight;

const SEED: u64 = 0x5eed_2024;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn fail(space: &AmbientSpace, what: impl std::fmt::Display) -> String {
    format!("{} : {what}", survey::instance_key(space))
}

/// Every labeled poset on `1..=4` elements with cyclic orders in `{2, 3}`,
/// plus instances with a `Z2 × Z2` coordinate.
fn sweep() -> Vec<AmbientSpace> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.extend(survey::instances(&SurveyConfig::new(n, vec![2, 3])).expect("sweep within caps"));
    }
    out.extend(mixed());
    out
}

fn mixed() -> Vec<AmbientSpace> {
    let c2 = Poset::new(&["a", "b"], &[("a", "b")]).unwrap();
    let l3 = Poset::new(&["a", "b", "c"], &[("a", "c")]).unwrap();
    let v3 = Poset::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
    vec![
        AmbientSpace::new(c2.clone(), vec![vec![2, 2], vec![2]]).unwrap(),
        AmbientSpace::new(c2, vec![vec![2], vec![2, 2]]).unwrap(),
        AmbientSpace::new(l3, vec![vec![2], vec![2, 2], vec![3]]).unwrap(),
        AmbientSpace::new(v3.clone(), vec![vec![2, 2], vec![4], vec![3]]).unwrap(),
        AmbientSpace::new(v3, vec![vec![2, 2], vec![2, 2], vec![2]]).unwrap(),
    ]
}

/// Hierarchical posets on `1..=4` elements with orders in `{1, 2, 3}`.
fn hierarchical_with_trivial_factors() -> Vec<AmbientSpace> {
    (1..=4)
        .flat_map(|n| survey::instances(&SurveyConfig::new(n, vec![1, 2, 3])).expect("sweep within caps"))
        .filter(|s| s.poset().is_hierarchical())
        .collect()
}

fn all_ok<T: Sync>(items: &[T], check: impl Fn(&T) -> Result<(), String> + Sync) -> Result<(), String> {
    // The lowest failing index is reported so failures are reproducible.
    let failures: Vec<(usize, String)> = items
        .par_iter()
        .enumerate()
        .filter_map(|(i, it)| check(it).err().map(|e| (i, e)))
        .collect();
    match failures.into_iter().min_by_key(|(i, _)| *i) {
        None => Ok(()),
        Some((_, e)) => Err(e),
    }
}

fn oracle_equality(sweep: &[AmbientSpace]) -> Outcome {
    all_ok(sweep, |s| {
        let words = s.enumerate().map_err(|e| fail(s, e))?;
        for a in &words {
            let closed = weight::f_poly_closed(s, a).map_err(|e| fail(s, e))?;
            let brute = weight::f_poly_bruteforce(s, a).map_err(|e| fail(s, e))?;
            if closed != brute {
                return Err(fail(s, format!("F differs at character {:?}", a.0)));
            }
        }
        let q = partition::weight_partition(s).map_err(|e| fail(s, e))?;
        let lambda = partition::dual_partition(s, &q).map_err(|e| fail(s, e))?;
        if weight::lambda_via_f(s).map_err(|e| fail(s, e))? != lambda {
            return Err(fail(s, "Λ via F differs from the dual partition"));
        }
        Ok(())
    })?;
    let characters: u128 = sweep.iter().map(|s| s.size()).sum();
    Ok(format!("{} instances, {characters} characters", sweep.len()))
}

fn reflexivity_triple(sweep: &[AmbientSpace]) -> Outcome {
    all_ok(sweep, |s| {
        let q = partition::weight_partition(s).map_err(|e| fail(s, e))?;
        let r = partition::is_reflexive(s, &q).map_err(|e| fail(s, e))?;
        if r.consistent() { Ok(()) } else { Err(fail(s, format!("{r:?}"))) }
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random = Vec::new();
    while random.len() < 200 {
        let n = rng.gen_range(1..=4);
        let factors: Vec<Vec<u64>> = (0..n)
            .map(|_| if rng.gen_bool(0.2) { vec![2, 2] } else { vec![rng.gen_range(1..=5)] })
            .collect();
        let size: u64 = factors.iter().flatten().product();
        if !(2..=32).contains(&size) {
            continue;
        }
        let space = AmbientSpace::new(Poset::antichain(&default_names(n)).unwrap(), factors).unwrap();
        let max_blocks = rng.gen_range(1..=size as usize);
        let p = partition::random_partition(Carrier::Codewords, size as usize, max_blocks, rng.gen());
        random.push((space, p));
    }
    let mut reflexive = 0;
    for (s, p) in &random {
        let r = partition::is_reflexive(s, p).map_err(|e| fail(s, e))?;
        if !r.consistent() {
            return Err(fail(s, format!("random partition {p:?}: {r:?}")));
        }
        reflexive += usize::from(r.is_reflexive());
    }
    Ok(format!("{} weight partitions, {} random partitions ({reflexive} reflexive)", sweep.len(), random.len()))
}

fn reflexivity_classification(sweep: &[AmbientSpace]) -> Outcome {
    all_ok(sweep, |s| {
        let c = weight::reflexivity_classification(s).map_err(|e| fail(s, e))?;
        if c.agrees() { Ok(()) } else { Err(fail(s, format!("{c:?}"))) }
    })?;
    let mut rows = 0;
    for n in 1..=4 {
        let survey = survey::run_survey(&SurveyConfig::new(n, vec![2, 3])).map_err(|e| e.to_string())?;
        if let Some(bad) = survey.iter().find(|r| !r.consistent()) {
            return Err(format!("inconsistent survey row {bad:?}"));
        }
        rows += survey.len();
    }
    let reflexive = sweep.iter().filter(|s| weight::hierarchical_with_uniform_levels(s)).count();
    Ok(format!("{} instances ({reflexive} reflexive), {rows} survey rows consistent", sweep.len()))
}

fn macwilliams(sweep: &[AmbientSpace]) -> Outcome {
    let small: Vec<&AmbientSpace> = sweep.iter().filter(|s| s.size() <= 64).collect();
    let checked: usize = small
        .par_iter()
        .map(|s| -> Result<usize, String> {
            let q = partition::weight_partition(s).map_err(|e| fail(s, e))?;
            let dual = partition::dual_partition(s, &q).map_err(|e| fail(s, e))?;
            let k = partition::krawtchouk_matrix(s, &q, &dual).map_err(|e| fail(s, e))?;
            let subgroups = s.subgroups().map_err(|e| fail(s, e))?;
            for d in &subgroups {
                let report = partition::macwilliams_check_with(s, &q, &dual, &k, d).map_err(|e| fail(s, e))?;
                if !report.holds {
                    return Err(fail(s, format!("subgroup {:?}: {report:?}", d.members())));
                }
            }
            Ok(subgroups.len())
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    Ok(format!("{} instances, {checked} subgroups", small.len()))
}

#[derive(Default)]
struct IdentityCounts {
    reduction: usize,
    removal: [usize; 3],
    addition: usize,
    expansion: usize,
    reduced_expansion: usize,
    closed_form: usize,
}

impl IdentityCounts {
    fn merge(mut self, o: IdentityCounts) -> IdentityCounts {
        self.reduction += o.reduction;
        for k in 0..3 {
            self.removal[k] += o.removal[k];
        }
        self.addition += o.addition;
        self.expansion += o.expansion;
        self.reduced_expansion += o.reduced_expansion;
        self.closed_form += o.closed_form;
        self
    }
}

fn subsets_of(p: &Poset) -> Vec<ElementSet> {
    p.ground().subsets().collect()
}

fn symbolic_identities_for(p: &Poset) -> Result<IdentityCounts, String> {
    let names = p.names().to_vec();
    let label = || format!("{names:?} {}", poset_duality::poset::relation_key(p));
    let generic = Pi::new(p.clone(), PiParams::generic(&names)).map_err(|e| e.to_string())?;
    let shifted = Pi::new(p.clone(), PiParams::generic_tau_minus_one(&names)).map_err(|e| e.to_string())?;
    let mut c = IdentityCounts::default();
    for y in subsets_of(p) {
        let max_y = p.maximal(y);
        for d in p.up_sets(y).map_err(|e| e.to_string())? {
            if generic.pi_reduced(y, d).unwrap() != generic.pi_direct(y, d).unwrap() {
                return Err(format!("{}: reduction fails for Y={:?} D={:?}", label(), y, d));
            }
            c.reduction += 1;
            if !shifted.check_reduced_inclusion_exclusion(y, d).unwrap() {
                return Err(format!("{}: reduced inclusion-exclusion fails for X={:?} D={:?}", label(), y, d));
            }
            c.reduced_expansion += 1;
            for e in max_y.iter() {
                if !generic.check_removal_identity(y, d, e).unwrap() {
                    return Err(format!("{}: removal fails for Y={:?} D={:?} e={e}", label(), y, d));
                }
                let case = if !d.contains(e) {
                    0
                } else if !p.minimal(d).contains(e) {
                    1
                } else {
                    2
                };
                c.removal[case] += 1;
                if !d.contains(e) {
                    if !generic.check_addition_identity(y, d, e).unwrap() {
                        return Err(format!("{}: addition fails for Y={:?} L={:?} e={e}", label(), y, d));
                    }
                    c.addition += 1;
                }
            }
        }
        for d in max_y.subsets() {
            let (first, second) = shifted.check_inclusion_exclusion(y, d).unwrap();
            if !(first && second) {
                return Err(format!("{}: inclusion-exclusion ({first}, {second}) for Y={:?} D={:?}", label(), y, d));
            }
            c.expansion += 1;
        }
    }
    if p.is_hierarchical() {
        for d in p.up_sets(p.ground()).unwrap().into_iter().filter(|d| !d.is_empty()) {
            if generic.hierarchical_closed_form(d).unwrap() != generic.pi_direct(p.ground(), d).unwrap() {
                return Err(format!("{}: hierarchical closed form fails for D={:?}", label(), d));
            }
            c.closed_form += 1;
        }
    }
    Ok(c)
}

fn symbolic_identities() -> Outcome {
    let posets: Vec<Poset> = (1..=4).flat_map(|n| labeled_posets(&default_names(n))).collect();
    let c = posets
        .par_iter()
        .map(symbolic_identities_for)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(IdentityCounts::default(), IdentityCounts::merge);
    if c.removal.contains(&0) {
        return Err(format!("removal identity case never exercised: {:?}", c.removal));
    }
    Ok(format!(
        "{} posets: reduction {}, removal {:?}, addition {}, inclusion-exclusion {}, reduced form {}, closed form {}",
        posets.len(),
        c.reduction,
        c.removal,
        c.addition,
        c.expansion,
        c.reduced_expansion,
        c.closed_form
    ))
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `τ > 0`, `η > −1`, `η ≠ 0`.
fn positive_draw(n: usize, rng: &mut ChaCha8Rng) -> PiParams<Rationals> {
    let tau = (0..n).map(|_| rational(rng.gen_range(1..=12), rng.gen_range(1..=6))).collect();
    let eta = (0..n)
        .map(|_| loop {
            let den = rng.gen_range(1..=6);
            let num = rng.gen_range(-den + 1..=3 * den);
            if num != 0 {
                break rational(num, den);
            }
        })
        .collect();
    let params = PiParams::new(Rationals, tau, eta).unwrap();
    assert_eq!(params.flags().positivity, Some(true));
    params
}

fn strict_descent() -> Outcome {
    const DRAWS: usize = 5;
    let posets: Vec<Poset> = (1..=5).flat_map(|n| labeled_posets(&default_names(n))).collect();
    let counts = posets
        .par_iter()
        .enumerate()
        .map(|(idx, p)| -> Result<(usize, usize), String> {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ idx as u64);
            let ground = p.ground();
            let up_sets = p.up_sets(ground).unwrap();
            let (mut pairs, mut steps) = (0, 0);
            for _ in 0..DRAWS {
                let pi = Pi::new(p.clone(), positive_draw(p.size(), &mut rng)).unwrap();
                for &d in &up_sets {
                    for &a in up_sets.iter().filter(|a| a.is_proper_subset(d)) {
                        if !pi.check_strict_descent(ground, a, d).unwrap() {
                            return Err(format!("{:?}: A={a:?} D={d:?} params {:?} {:?}", p, pi.params().tau(), pi.params().eta()));
                        }
                        pairs += 1;
                    }
                }
                for y in ground.subsets() {
                    let max_y = p.maximal(y);
                    for a in max_y.subsets().filter(|a| *a != max_y) {
                        for e in (max_y - a).iter() {
                            if !pi.check_maximal_step_descent(y, a, e).unwrap() {
                                return Err(format!("{:?}: Y={y:?} A={a:?} e={e}", p));
                            }
                            steps += 1;
                        }
                    }
                }
            }
            Ok((pairs, steps))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pairs: usize = counts.iter().map(|c| c.0).sum();
    let steps: usize = counts.iter().map(|c| c.1).sum();
    Ok(format!("{} posets x {DRAWS} draws: {pairs} up-set pairs, {steps} maximal steps", posets.len()))
}

fn theta_size(sweep: &[AmbientSpace]) -> Outcome {
    let mut exact = 0;
    for s in sweep {
        let report = Pi::new(s.poset().clone(), PiParams::from_sizes(&s.sizes())).unwrap().theta_report().map_err(|e| fail(s, e))?;
        if !report.agrees() {
            return Err(fail(s, format!("{report:?}")));
        }
        if report.exactly_n_plus_one != report.hierarchical_level_eta {
            return Err(fail(s, format!("{report:?}")));
        }
        exact += usize::from(report.exactly_n_plus_one);
    }
    Ok(format!("{} instances, {exact} with |Θ| = n + 1", sweep.len()))
}

fn scheme_instances(sweep: &[AmbientSpace]) -> Vec<AmbientSpace> {
    let mut out = sweep.to_vec();
    out.extend(
        labeled_posets(&default_names(5))
            .into_iter()
            .map(|p| AmbientSpace::cyclic(p, &[2; 5]).unwrap()),
    );
    let l3 = Poset::new(&["a", "b", "c"], &[("a", "c")]).unwrap();
    out.push(AmbientSpace::cyclic(l3, &[8, 8, 8]).unwrap());
    let v3 = Poset::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
    out.push(AmbientSpace::cyclic(v3, &[8, 8, 8]).unwrap());
    out
}

fn witness_and_scheme(sweep: &[AmbientSpace]) -> Outcome {
    let instances = scheme_instances(sweep);
    let witnesses: usize = instances
        .par_iter()
        .map(|s| -> Result<usize, String> {
            if s.size() <= 512 {
                let agreement = scheme::weight_scheme_agreement(s).map_err(|e| fail(s, e))?;
                if !agreement.agrees() {
                    return Err(fail(s, format!("{agreement:?}")));
                }
            }
            if s.poset().is_hierarchical() || !s.all_at_least_two() {
                return Ok(0);
            }
            let w = scheme::nonhierarchical_witness(s).map_err(|e| fail(s, e))?;
            if w.certifies() { Ok(1) } else { Err(fail(s, format!("{w:?}"))) }
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    Ok(format!("{} instances, {witnesses} witnesses", instances.len()))
}

fn hierarchical_blocks(sweep: &[AmbientSpace]) -> Outcome {
    let mut instances: Vec<AmbientSpace> = sweep.iter().filter(|s| s.poset().is_hierarchical()).cloned().collect();
    instances.extend(hierarchical_with_trivial_factors().into_iter().filter(|s| !s.all_at_least_two()));
    instances.retain(|s| s.size() <= 256);
    let pairs: usize = instances
        .par_iter()
        .map(|s| -> Result<usize, String> {
            let q = partition::weight_partition(s).map_err(|e| fail(s, e))?;
            let lambda = partition::dual_partition(s, &q).map_err(|e| fail(s, e))?;
            let words = s.enumerate().map_err(|e| fail(s, e))?;
            for (i, a) in words.iter().enumerate() {
                for (j, g) in words.iter().enumerate() {
                    let criterion = weight::hierarchical_block_criterion(s, a, g).map_err(|e| fail(s, e))?;
                    if criterion != (lambda.block_of(i) == lambda.block_of(j)) {
                        return Err(fail(s, format!("characters {:?} and {:?}", a.0, g.0)));
                    }
                }
            }
            Ok(words.len() * words.len())
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    Ok(format!("{} hierarchical instances, {pairs} character pairs", instances.len()))
}

fn finer_than_dual_weight() -> Outcome {
    let mut uniform = Vec::new();
    for n in 1..=4 {
        uniform.extend(survey::instances(&SurveyConfig::new(n, vec![3])).unwrap());
    }
    for n in 1..=3 {
        uniform.extend(survey::instances(&SurveyConfig::new(n, vec![4])).unwrap());
        uniform.extend(survey::instances(&SurveyConfig::new(n, vec![5])).unwrap());
    }
    let hierarchical = hierarchical_with_trivial_factors();
    let with_trivial = hierarchical.iter().filter(|s| !s.all_at_least_two()).count();
    let check = |s: &AmbientSpace| {
        let q = partition::weight_partition(s).map_err(|e| fail(s, e))?;
        let lambda = partition::dual_partition(s, &q).map_err(|e| fail(s, e))?;
        let dual_weight = partition::dual_weight_partition(s).map_err(|e| fail(s, e))?;
        if partition::is_finer(&lambda, &dual_weight).map_err(|e| fail(s, e))? {
            Ok(())
        } else {
            Err(fail(s, "Λ is not finer than the dual weight partition"))
        }
    };
    all_ok(&uniform, check)?;
    all_ok(&hierarchical, check)?;
    Ok(format!(
        "{} uniform instances, {} hierarchical instances ({with_trivial} with an order-1 coordinate)",
        uniform.len(),
        hierarchical.len()
    ))
}

fn main() -> ExitCode {
    let sweep = sweep();
    let criteria: Vec<Criterion> = vec![
        ("closed-form F and Λ via F match brute force", Box::new(|| oracle_equality(&sweep))),
        ("|Γ| ≤ |Γ̂|, bidual finer, reflexive iff equal counts", Box::new(|| reflexivity_triple(&sweep))),
        ("reflexive iff Λ = Q(Ĥ, P̄) iff hierarchical with level-constant orders", Box::new(|| reflexivity_classification(&sweep))),
        ("MacWilliams identity for every subgroup", Box::new(|| macwilliams(&sweep))),
        ("symbolic π identities", Box::new(symbolic_identities)),
        ("strict descent under positive parameters", Box::new(strict_descent)),
        ("|Θ| ≥ n + 1 with equality iff hierarchical level-constant η", Box::new(|| theta_size(&sweep))),
        ("non-hierarchical witnesses and translation scheme agreement", Box::new(|| witness_and_scheme(&sweep))),
        ("hierarchical Λ blocks by order multisets", Box::new(|| hierarchical_blocks(&sweep))),
        ("Λ finer than Q(Ĥ, P̄)", Box::new(finer_than_dual_weight)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{detail}] ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} [{why}] ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
