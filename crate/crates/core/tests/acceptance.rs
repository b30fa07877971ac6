//! End-to-end acceptance run: one line per criterion, then a nonzero exit
//! status if any criterion failed.

use std::process::ExitCode;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use gmcat::adjoint::{check_adjunction, witness_hat_unit_failure, FreeAlgebra, Mode};
use gmcat::catoperad::{validate_operad, CatOperad};
use gmcat::dalgebra::{underlying, DAlgebra};
use gmcat::dmulticat::{validate_multicat, DMulticat};
use gmcat::fincat::FinCategory;
use gmcat::finset::{orbit_pullback_comparison, FinFn, GroupAction, Label, Perm};
use gmcat::opmonad::checks::check_cartesian;
use gmcat::opmonad::dcat::{check_preserves_cover, sample_covers};
use gmcat::opmonad::{Monad, MonadElem};
use gmcat::report::Report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;
const BOUND: usize = 3;
const OPERAD_LIMIT: Duration = Duration::from_secs(10);
const CARTESIAN_LIMIT: Duration = Duration::from_secs(60);
const UNDERLYING_LIMIT: Duration = Duration::from_secs(30);
const HOM_LIMIT: Duration = Duration::from_secs(120);
const CARTESIAN_SQUARES: usize = 100;
const COVERS: usize = 10;
const ORBIT_SQUARES: usize = 50;
const HOM_RANGE: usize = 4;

type Outcome = Result<(), String>;

/// Instances examined by the criterion currently running.
static INSTANCES: AtomicU64 = AtomicU64::new(0);

fn count(n: u64) {
    INSTANCES.fetch_add(n, Ordering::Relaxed);
}

fn monad(name: &str, level: usize) -> Arc<Monad> {
    Arc::new(Monad::new(Arc::new(CatOperad::builtin(name, level).expect("builtin"))).expect("sigma-free"))
}

fn require(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn valid(report: &Report) -> Outcome {
    count(report.checks.iter().map(|c| c.instances).sum());
    require(report.is_valid(), || {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        format!("{}: {}", report.title, names.join(", "))
    })
}

fn operad_suite() -> Outcome {
    for op in [CatOperad::barratt_eccles(4), CatOperad::associative(4)] {
        valid(&validate_operad(&op))?;
        require(op.is_sigma_free(), || format!("{} is not Σ-free", op.name()))?;
    }
    let com = CatOperad::commutative(4);
    let witness = com.freeness_witness().ok_or("commutative operad reported Σ-free")?;
    require(witness.contains("fixes"), || format!("unexpected witness {witness}"))
}

fn cartesian_suite() -> Outcome {
    for name in ["barratt-eccles", "associative"] {
        let m = monad(name, BOUND);
        for j in 0..2 {
            let r = check_cartesian(&m, j, SEED, CARTESIAN_SQUARES, BOUND);
            valid(&r)?;
            let squares = r.check("pullback-preservation").map_or(0, |c| c.instances);
            require(squares > 0, || format!("{name} degree {j}: no instances"))?;
        }
    }
    let com = Monad::new_unchecked(Arc::new(CatOperad::commutative(BOUND)));
    let r = check_cartesian(&com, 0, SEED, CARTESIAN_SQUARES, BOUND);
    let mu = r.check("mu-naturality").ok_or("no mu-naturality check")?;
    require(mu.failures >= 1 && !mu.witnesses.is_empty(), || "commutative operad passed μ-naturality".into())
}

fn cover_suite() -> Outcome {
    let covers = sample_covers(SEED, COVERS).map_err(|e| e.to_string())?;
    require(covers.len() == COVERS, || "too few covers".into())?;
    for name in ["barratt-eccles", "associative"] {
        let m = monad(name, BOUND);
        for f in &covers {
            valid(&check_preserves_cover(&m, f, BOUND))?;
        }
    }
    Ok(())
}

/// `f(σ, n) = (σ∘hₙ, dₙ)` for random `hₙ ∈ G` and names `dₙ` of the target.
fn equivariant_map(rng: &mut ChaCha8Rng, group: &[Perm], src: &GroupAction, tgt: &GroupAction) -> FinFn {
    let (sources, targets): (usize, usize) = (src.carrier().len() / group.len(), tgt.carrier().len() / group.len());
    let choices: Vec<(usize, usize)> = (0..sources).map(|_| (rng.gen_range(0..group.len()), rng.gen_range(0..targets))).collect();
    let table = src
        .carrier()
        .labels()
        .iter()
        .map(|l| {
            let Label::Tuple(parts) = l else { unreachable!("free G-set labels are pairs") };
            let sigma = perm_of(&parts[0]);
            let Label::Int(n) = parts[1] else { unreachable!("names are integers") };
            let (h, d) = choices[n as usize];
            let image = Label::pair(Label::ints(sigma.compose(&group[h]).one_based()), Label::Int(d as i64));
            tgt.carrier().index_of(&image).expect("free G-set element")
        })
        .collect();
    FinFn::new(src.carrier().clone(), tgt.carrier().clone(), table).expect("well-typed")
}

fn perm_of(l: &Label) -> Perm {
    let Label::Tuple(xs) = l else { unreachable!("permutation labels are tuples") };
    let images: Vec<usize> = xs
        .iter()
        .map(|x| match x {
            Label::Int(i) => *i as usize,
            _ => unreachable!("permutation entries are integers"),
        })
        .collect();
    Perm::from_one_based(&images).expect("permutation")
}

fn free_gset(group: &[Perm], names: usize) -> GroupAction {
    let names: Vec<Label> = (0..names).map(|i| Label::Int(i as i64)).collect();
    GroupAction::free_on(group.to_vec(), &names).expect("free")
}

fn orbit_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for s in 0..ORBIT_SQUARES {
        let group = Perm::all(2 + s % 2);
        let sizes: [usize; 3] = [rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=2)];
        let [b, c, d] = sizes.map(|n| free_gset(&group, n));
        let f = equivariant_map(&mut rng, &group, &b, &d);
        let g = equivariant_map(&mut rng, &group, &c, &d);
        let cmp = orbit_pullback_comparison(&b, &c, &d, &f, &g).map_err(|e| e.to_string())?;
        count(1);
        require(cmp.is_isomorphism(), || format!("square {s}: {cmp:?}"))?;
        // orbits of a free pullback: |A| / |G|
        let fiber_pairs: usize = b
            .carrier()
            .indices()
            .map(|x| c.carrier().indices().filter(|&y| f.apply(x) == g.apply(y)).count())
            .sum();
        require(cmp.orbits_of_pullback * group.len() == fiber_pairs, || format!("square {s}: orbit count"))?;
    }
    Ok(())
}

fn underlying_suite() -> Outcome {
    let a = DAlgebra::cyclic(monad("barratt-eccles", BOUND), 2).map_err(|e| e.to_string())?;
    let u = underlying(&a).map_err(|e| e.to_string())?;
    let r = validate_multicat(&u.multicat);
    valid(&r)?;
    let m3 = r.check("composition-associativity").map_or(0, |c| c.instances);
    require(m3 > 0, || "associativity square never instantiated".into())
}

fn functions(m: usize, n: usize) -> usize {
    // enumerate every m-tuple over n values
    let mut count = 0;
    gmcat::catoperad::for_each_index(&vec![n; m], &mut |_| count += 1);
    count
}

fn monotone_functions(m: usize, n: usize) -> usize {
    let mut count = 0;
    gmcat::catoperad::for_each_index(&vec![n; m], &mut |idx| {
        if idx.windows(2).all(|w| w[0] <= w[1]) {
            count += 1;
        }
    });
    count
}

fn word(free: &FreeAlgebra, n: usize) -> Result<MonadElem<usize>, String> {
    free.objects().into_iter().find(|x| x.arity() == n).ok_or_else(|| format!("no object of arity {n}"))
}

fn hom_counts() -> Outcome {
    for (name, oracle) in [("barratt-eccles", functions as fn(usize, usize) -> usize), ("associative", monotone_functions)] {
        let m = Arc::new(DMulticat::terminal(monad(name, HOM_RANGE), HOM_RANGE).map_err(|e| e.to_string())?);
        let free = FreeAlgebra::new(m, Mode::Quotient, HOM_RANGE).map_err(|e| e.to_string())?;
        for source in 0..=HOM_RANGE {
            for target in 0..=HOM_RANGE {
                let hom = free.hom(&word(&free, source)?, &word(&free, target)?).map_err(|e| e.to_string())?;
                let (got, want) = (hom.representatives().len(), oracle(source, target));
                count(hom.elements.len() as u64);
                require(got == want, || format!("{name} {source}→{target}: {got} classes, oracle {want}"))?;
            }
        }
    }
    Ok(())
}

fn standard_pairs() -> Result<Vec<(Arc<DMulticat>, DAlgebra)>, String> {
    let ass = monad("associative", BOUND);
    let be = monad("barratt-eccles", BOUND);
    let e = |e: gmcat::Error| e.to_string();
    Ok(vec![
        (
            Arc::new(DMulticat::terminal(ass.clone(), BOUND).map_err(e)?),
            DAlgebra::free(ass, &FinCategory::terminal(), BOUND).map_err(e)?,
        ),
        (Arc::new(DMulticat::terminal(be.clone(), BOUND).map_err(e)?), DAlgebra::cyclic(be, 2).map_err(e)?),
    ])
}

fn adjunction_suite(reports: &mut Vec<String>) -> Outcome {
    for (m, a) in standard_pairs()? {
        let r = check_adjunction(m, &a, BOUND, Mode::Quotient);
        valid(&r)?;
        for name in ["triangles: triangle-algebra", "triangles: triangle-multicat", "counit: counit-well-defined", "counit: counit-algebra-map"] {
            let n = r.check(name).map_or(0, |c| c.instances);
            require(n > 0, || format!("{name} never instantiated"))?;
        }
        reports.push(r.to_json());
    }
    Ok(())
}

fn hat_witness() -> Outcome {
    let m = Arc::new(DMulticat::terminal(monad("barratt-eccles", BOUND), BOUND).map_err(|e| e.to_string())?);
    let w = witness_hat_unit_failure(m.clone(), BOUND).map_err(|e| e.to_string())?.ok_or("no provisional failure")?;
    require(w.unit_of_action != w.action_on_unit, || "witness sides agree".into())?;
    let quotient = FreeAlgebra::new(m, Mode::Quotient, BOUND).map_err(|e| e.to_string())?;
    require(quotient.equivalent(&w.unit_of_action, &w.action_on_unit).map_err(|e| e.to_string())?, || {
        format!("not identified in the quotient: {}", w.description)
    })
}

fn seeded_reports(adjunction: bool) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let be = monad("barratt-eccles", BOUND);
    for j in 0..2 {
        out.push(check_cartesian(&be, j, SEED, CARTESIAN_SQUARES, BOUND).to_json());
    }
    for f in sample_covers(SEED, COVERS).map_err(|e| e.to_string())? {
        out.push(check_preserves_cover(&be, &f, BOUND).to_json());
    }
    out.push(validate_operad(&CatOperad::barratt_eccles(BOUND)).to_json());
    if adjunction {
        adjunction_suite(&mut out)?;
    }
    Ok(out)
}

fn determinism(first_adjunction: &[String]) -> Outcome {
    let first = seeded_reports(false)?;
    let second = seeded_reports(true)?;
    let (plain, adjunction) = second.split_at(first.len());
    require(first == plain, || "seeded reports differ between runs".into())?;
    require(first_adjunction == adjunction, || "adjunction reports differ between runs".into())
}

fn main() -> ExitCode {
    let mut all_passed = true;
    let mut run = |n: usize, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        INSTANCES.store(0, Ordering::Relaxed);
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.1?}, limit {limit:?}"));
            }
        }
        match &outcome {
            Ok(()) => println!("criterion {n} {name}: PASS ({elapsed:.1?}, {} instances)", INSTANCES.load(Ordering::Relaxed)),
            Err(why) => {
                all_passed = false;
                println!("criterion {n} {name}: FAIL ({elapsed:.1?}): {why}");
            }
        }
    };
    let mut adjunction_reports = Vec::new();
    run(1, "operad suite", Some(OPERAD_LIMIT), &mut operad_suite);
    run(2, "cartesian suite", Some(CARTESIAN_LIMIT), &mut cartesian_suite);
    run(3, "cover suite", None, &mut cover_suite);
    run(4, "orbit suite", None, &mut orbit_suite);
    run(5, "underlying multicategory", Some(UNDERLYING_LIMIT), &mut underlying_suite);
    run(6, "free hom-set counts", Some(HOM_LIMIT), &mut hom_counts);
    run(7, "adjunction suite", None, &mut || adjunction_suite(&mut adjunction_reports));
    run(8, "provisional unit witness", None, &mut hat_witness);
    run(9, "determinism", None, &mut || determinism(&adjunction_reports));
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
