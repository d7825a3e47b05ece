//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if any
//! criterion fails outside its documented failure signature.
//!
//! All comparisons are exact (rational arithmetic, tolerance 0). The only
//! wall-clock bounds are < 1 s for criterion 1 and < 300 s for the sweep.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use mixdecomp::decomposition::{decompose, full_chain_seeded, mixed_cell_count_identity, ChainReport};
use mixdecomp::direction::Direction;
use mixdecomp::family::{sign, FamilyKind, SubsetFamily};
use mixdecomp::gen::{gen, random_lattice, Profile};
use mixdecomp::instance::Instance;
use mixdecomp::mixedvolume::{brick_identity, mixed_cell_volume, mixed_volume, MvMethod};
use mixdecomp::oracle;
use mixdecomp::subdivision::{MixedSubdivision, MAX_RETRIES};
use mixdecomp::tropical::{brick_discrete, discrete_mixed_volume, kouchnirenko, search_t, SignMode};
use mixdecomp::{Error, ExactPoint, Polytope, Rational, Support};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SWEEP_INSTANCES: u64 = 240;
const SWEEP_BUDGET: Duration = Duration::from_secs(300);
const EXAMPLE_BUDGET: Duration = Duration::from_secs(1);

fn corpus(name: &str) -> Instance {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    Instance::load(&path).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn hulls(supports: &[Support]) -> Vec<Polytope> {
    supports.iter().map(|s| Polytope::from_points(s.points()).unwrap()).collect()
}

fn pt(xs: &[i64]) -> ExactPoint {
    ExactPoint::from_ints(xs)
}

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
    /// Whether a failure matches the analysed counterexample pattern.
    documented: bool,
}

fn report(o: &Outcome) {
    let status = if o.pass { "PASS" } else { "FAIL" };
    let note = if !o.pass && o.documented { " [documented counterexamples, see README]" } else { "" };
    println!("criterion {:2} {status}: {}: {}{note}", o.id, o.title, o.detail);
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let inst = corpus("disbigger.json");
    let s = inst.to_supports().unwrap();
    let d = discrete_mixed_volume(&s).unwrap();
    let d_oracle = oracle::dmv(&s).unwrap();
    let polys = hulls(&s);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mvs: Vec<Rational> = MvMethod::ALL.iter().map(|&m| mixed_volume(&polys, m, &mut rng).unwrap()).collect();
    let mv_oracle = oracle::mv(&s).unwrap();
    let elapsed = start.elapsed();
    let two = Rational::from_int(2);
    let pass = d == 3 && d_oracle == 3 && mvs.iter().all(|v| *v == two) && mv_oracle == two && elapsed < EXAMPLE_BUDGET;
    Outcome {
        id: 1,
        title: "disbigger D = 3, MV = 2 by all methods",
        pass,
        detail: format!("D = {d} (oracle {d_oracle}), MV by cells/altvol/lattice = {mvs:?} (oracle {mv_oracle}), {elapsed:.2?}"),
        documented: false,
    }
}

fn criterion_2() -> Outcome {
    let inst = corpus("exc.json");
    let sub = MixedSubdivision::build(inst.lifted_system().unwrap().unwrap()).unwrap();
    let shapes: Vec<Vec<usize>> = sub.cells().iter().map(|c| c.dims.clone()).collect();
    let two_cells = sub.cells().len() == 2 && shapes.contains(&vec![1, 0]) && shapes.contains(&vec![0, 1]);
    let fam = SubsetFamily::build(FamilyKind::Minkowski, &inst.to_supports().unwrap(), None).unwrap();
    let delta = &inst.deltas.as_ref().unwrap()[0];
    let s = decompose(&fam, &sub, delta.as_slice()).unwrap();
    let pass = two_cells && s.n == 1 && s.a == 0 && s.excessive == vec![pt(&[2])] && s.n_delta == 0;
    Outcome {
        id: 2,
        title: "exc decomposition",
        pass,
        detail: format!(
            "two-cell subdivision {two_cells}, N = {}, A = {}, Exc = {:?}, N_delta = {}",
            s.n,
            s.a,
            s.excessive.iter().map(ToString::to_string).collect::<Vec<_>>(),
            s.n_delta
        ),
        documented: false,
    }
}

fn criterion_3() -> Outcome {
    let inst = corpus("excplusdefec.json");
    let s = inst.to_supports().unwrap();
    let sub = MixedSubdivision::build(inst.lifted_system().unwrap().unwrap()).unwrap();
    let mv_cells = mixed_cell_volume(&sub);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mv_lattice = mixed_volume(&hulls(&s), MvMethod::LatticePoints, &mut rng).unwrap();
    let d_oracle = oracle::dmv(&s).unwrap();
    let d = discrete_mixed_volume(&s).unwrap();
    let p1: Vec<ExactPoint> = s[0].points().to_vec();
    let has_cell = sub.cells().iter().any(|c| {
        let mut a = c.summands[0].clone();
        a.sort();
        let mut b = p1.clone();
        b.sort();
        a == b && c.summands[1] == vec![pt(&[1, 2])]
    });
    let fam = SubsetFamily::build(FamilyKind::Minkowski, &s, None).unwrap();
    let delta = &inst.deltas.as_ref().unwrap()[0];
    let step = decompose(&fam, &sub, delta.as_slice()).unwrap();
    let excessive_23 = step.excessive.contains(&pt(&[2, 3]));
    let four = Rational::from_int(4);
    let pass = mv_cells == four
        && mv_lattice == four
        && d_oracle == 5
        && d == 5
        && step.n == d
        && step.set_identity_holds()
        && has_cell
        && excessive_23;
    Outcome {
        id: 3,
        title: "excplusdefec",
        pass,
        detail: format!(
            "MV cells = {mv_cells}, lattice = {mv_lattice}; D oracle = {d_oracle} (12 sum points; the original text says 4); \
             N = {} = {} + {} + {}; cell P1+(1,2) {has_cell}; (2,3) excessive {excessive_23}",
            step.n,
            step.a,
            step.excessive.len(),
            step.n_delta
        ),
        documented: false,
    }
}

fn criterion_4() -> Outcome {
    let inst = corpus("excplusdefecbis.json");
    let d = oracle::dmv(&inst.to_supports().unwrap()).unwrap();
    let sup = inst.superset_supports().unwrap().unwrap();
    let d_sup = oracle::dmv(&sup).unwrap();
    let module = discrete_mixed_volume(&sup).unwrap();
    Outcome {
        id: 4,
        title: "excplusdefecbis non-monotonicity",
        pass: d_sup == d - 1 && module == d_sup,
        detail: format!("D(W1,W2) = {d}, D(W1 + (1,1), W2) = {d_sup}"),
        documented: false,
    }
}

/// One sweep instance with everything criteria 5 to 7 need.
struct SweepCase {
    seed: u64,
    n: usize,
    r: usize,
    supports: Vec<Support>,
    sub: MixedSubdivision,
    chains: Vec<(FamilyKind, ChainReport, i64)>,
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    /// Failures keyed by "n=.. r=..".
    by_shape: BTreeMap<String, usize>,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, case: &SweepCase, what: &str) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            *self.by_shape.entry(format!("n={} r={}", case.n, case.r)).or_default() += 1;
            if self.first.is_none() {
                self.first = Some(format!("seed {} {what}", case.seed));
            }
        }
    }

    fn only_shapes(&self, allowed: impl Fn(usize, usize) -> bool) -> bool {
        self.by_shape.keys().all(|k| {
            let nums: Vec<usize> = k.split(' ').map(|p| p[2..].parse().unwrap()).collect();
            allowed(nums[0], nums[1])
        })
    }

    fn summary(&self) -> String {
        format!("{}/{} fail {:?}", self.failed, self.checked, self.by_shape)
    }
}

const SWEEP_FAMILIES: [FamilyKind; 5] = [
    FamilyKind::Minkowski,
    FamilyKind::Lattice,
    FamilyKind::InteriorLattice,
    FamilyKind::Vertices,
    FamilyKind::InteriorMinkowski,
];

fn sweep(errors: &mut Vec<String>) -> Vec<SweepCase> {
    let mut cases = Vec::new();
    for seed in 0..SWEEP_INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 1 + (seed % 3) as usize;
        let r = 1 + ((seed / 3) % 3) as usize;
        let supports = random_lattice(n, r, 6, 8, true, &mut rng);
        let sub = match MixedSubdivision::generic(supports.clone(), true, &mut rng) {
            Ok(s) => s,
            Err(e) => {
                errors.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let mut chains = Vec::new();
        for kind in SWEEP_FAMILIES {
            let fam = SubsetFamily::build(kind, &supports, Some(&sub)).unwrap();
            match full_chain_seeded(&fam, &sub, &mut rng) {
                Ok(c) => chains.push((kind, c, fam.alternating_sum())),
                Err(e) => errors.push(format!("seed {seed} {kind}: {e}")),
            }
        }
        cases.push(SweepCase { seed, n, r, supports, sub, chains });
    }
    cases
}

fn criterion_5(cases: &[SweepCase], elapsed: Duration, errors: &[String]) -> (Outcome, bool) {
    let mut set = Tally::default();
    let mut mono = Tally::default();
    let mut terminal = Tally::default();
    let mut signed = Tally::default();
    for case in cases {
        for (kind, c, _) in &case.chains {
            if *kind == FamilyKind::InteriorMinkowski {
                continue;
            }
            set.record(c.step.set_identity_holds(), case, kind.name());
            mono.record(c.non_increasing(), case, kind.name());
            terminal.record(c.terminal_agrees(), case, kind.name());
            signed.record(c.step.signed_identity_holds() && c.recursion_agrees(), case, kind.name());
        }
    }
    let pass = set.failed == 0 && mono.failed == 0 && terminal.failed == 0 && errors.is_empty() && elapsed < SWEEP_BUDGET;
    // Set-count identity breaks only with three summands, chains only rise
    // with more summands than dimensions; the signed identity never breaks.
    let documented = set.only_shapes(|_, r| r == 3)
        && mono.only_shapes(|n, r| r > n)
        && terminal.failed == 0
        && signed.failed == 0
        && errors.is_empty()
        && elapsed < SWEEP_BUDGET;
    let out = Outcome {
        id: 5,
        title: "identity sweep (minkowski, lattice, interior-lattice, vertices)",
        pass,
        detail: format!(
            "{} instances in {elapsed:.1?}; N = A + |Exc| + N_delta {}; chain non-increasing {}; terminal formula {}; \
             signed identity and recursion {}; errors {}",
            cases.len(),
            set.summary(),
            mono.summary(),
            terminal.summary(),
            signed.summary(),
            errors.len()
        ),
        documented,
    };
    (out, documented)
}

fn item(kind: FamilyKind) -> usize {
    match kind {
        FamilyKind::Minkowski => 1,
        FamilyKind::Lattice => 2,
        FamilyKind::InteriorMinkowski => 3,
        FamilyKind::InteriorLattice => 4,
        FamilyKind::Vertices => 5,
        _ => unreachable!(),
    }
}

fn criterion_6(cases: &[SweepCase]) -> (Outcome, bool) {
    let mut cells = Tally::default();
    let mut kouch = Tally::default();
    let mut oracle_d = Tally::default();
    let mut oracle_mv = Tally::default();
    let mut patch = Tally::default();
    let mut items: BTreeMap<usize, Tally> = BTreeMap::new();
    for case in cases {
        let d = discrete_mixed_volume(&case.supports).unwrap();
        kouch.record(d <= kouchnirenko(&case.supports), case, "D <= kouchnirenko");
        oracle_d.record(oracle::dmv(&case.supports).unwrap() == d, case, "dmv oracle");
        if case.r == case.n {
            let mixed = case.sub.mixed_cells().count() as i64;
            cells.record(mixed <= d, case, "mixed cells <= D");
            oracle_mv.record(oracle::mv(&case.supports).unwrap() == mixed_cell_volume(&case.sub), case, "mv oracle");
            let total: usize = case.supports.iter().map(Support::len).sum();
            if total <= 12 {
                let mut rng = ChaCha8Rng::seed_from_u64(case.seed);
                let s = search_t(&case.supports, 1, SignMode::Exhaustive, &mut rng).unwrap();
                patch.record(s.best_count as i64 <= d, case, "patchwork");
            }
        }
        for (kind, _, value) in &case.chains {
            let offset = if kind.is_interior() { sign(case.r, 0) } else { 0 };
            items.entry(item(*kind)).or_default().record(value - offset >= 0, case, kind.name());
        }
    }
    let bounds_ok = cells.failed == 0 && kouch.failed == 0 && patch.failed == 0;
    let oracles_ok = oracle_d.failed == 0 && oracle_mv.failed == 0;
    let items_ok = items.values().all(|t| t.failed == 0);
    let documented = bounds_ok
        && oracles_ok
        && items.values().all(|t| t.only_shapes(|n, r| r > n))
        && items[&2].failed == 0
        && items[&5].failed == 0;
    let item_text: Vec<String> = items.iter().map(|(k, t)| format!("item {k} {}", t.summary())).collect();
    let out = Outcome {
        id: 6,
        title: "bounds and nonnegativity sweep",
        pass: bounds_ok && oracles_ok && items_ok,
        detail: format!(
            "mixed cells <= D {}; D <= prod(|W_i|-1) {}; patchwork <= D (exhaustive signs) {}; D vs oracle {}; \
             MV vs oracle {}; {}",
            cells.summary(),
            kouch.summary(),
            patch.summary(),
            oracle_d.summary(),
            oracle_mv.summary(),
            item_text.join("; ")
        ),
        documented,
    };
    (out, documented)
}

fn criterion_7(cases: &[SweepCase]) -> Outcome {
    let mut t = Tally::default();
    for case in cases.iter().filter(|c| c.r == c.n && c.sub.is_pure()) {
        let m = mixed_cell_count_identity(&case.sub).unwrap();
        t.record(m.pass && m.lhs == m.rhs, case, "mixed cell count");
    }
    Outcome {
        id: 7,
        title: "sum (-1)^(n-|I|) |V_I| = number of mixed cells",
        pass: t.failed == 0 && t.checked > 0,
        detail: format!("pure r = n instances: {}", t.summary()),
        documented: false,
    }
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for seed in 0..50 {
        let inst = gen(Profile::Segments, seed);
        let s = inst.to_supports().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = false;
        for _ in 0..MAX_RETRIES {
            let delta = Direction::random(inst.dim, &mut rng);
            match (brick_identity(&s, &delta), brick_discrete(&s, &delta)) {
                (Ok(b), Ok(d)) => {
                    if !(b.pass && d.pass && d.d == d.shifted_sum_points as i64 && d.d == d.kouchnirenko) {
                        failures.push(seed);
                    }
                    done = true;
                    break;
                }
                (Err(Error::Genericity { .. }), _) | (_, Err(Error::Genericity { .. })) => continue,
                (Err(e), _) | (_, Err(e)) => panic!("segments seed {seed}: {e}"),
            }
        }
        if !done {
            failures.push(seed);
        }
        checked += 1;
    }
    Outcome {
        id: 8,
        title: "brick identities on segment systems",
        pass: failures.is_empty() && checked == 50,
        detail: format!("{checked} systems, failures {failures:?}"),
        documented: false,
    }
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    for seed in 0..50 {
        let s = gen(Profile::GeneralPosition, seed).to_supports().unwrap();
        let d = oracle::dmv(&s).unwrap();
        if d != kouchnirenko(&s) || discrete_mixed_volume(&s).unwrap() != d {
            failures.push(seed);
        }
    }
    Outcome {
        id: 9,
        title: "general position D = prod(|W_i|-1)",
        pass: failures.is_empty(),
        detail: format!("50 instances, failures {failures:?}"),
        documented: false,
    }
}

fn criterion_10() -> Outcome {
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut attains_3 = 0;
    for seed in 0..50 {
        let s = gen(Profile::SameSupport, seed).to_supports().unwrap();
        let k = s[0].len() as i64;
        *sizes.entry(k as usize).or_default() += 1;
        let d = oracle::dmv(&s).unwrap();
        if d > (k - 1) * (k - 2) / 2 {
            violations.push(seed);
        }
        if k == 4 && d == 3 {
            attains_3 += 1;
        }
    }
    Outcome {
        id: 10,
        title: "same-support plane bound D(W,W) <= (|W|-1)(|W|-2)/2",
        pass: violations.is_empty() && attains_3 > 0 && sizes.keys().all(|k| (4..=6).contains(k)),
        detail: format!("sizes {sizes:?}, violations {violations:?}, |W| = 4 instances with D = 3: {attains_3}"),
        documented: false,
    }
}

fn main() {
    let mut outcomes = vec![criterion_1(), criterion_2(), criterion_3(), criterion_4()];
    let start = Instant::now();
    let mut errors = Vec::new();
    let cases = sweep(&mut errors);
    let elapsed = start.elapsed();
    for e in &errors {
        println!("sweep error: {e}");
    }
    outcomes.push(criterion_5(&cases, elapsed, &errors).0);
    outcomes.push(criterion_6(&cases).0);
    outcomes.push(criterion_7(&cases));
    outcomes.extend([criterion_8(), criterion_9(), criterion_10()]);
    for o in &outcomes {
        report(o);
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let undocumented: Vec<u32> = outcomes.iter().filter(|o| !o.pass && !o.documented).map(|o| o.id).collect();
    println!("acceptance: {passed}/{} criteria pass", outcomes.len());
    if !undocumented.is_empty() {
        println!("acceptance: criteria {undocumented:?} fail outside the documented counterexamples");
        std::process::exit(1);
    }
}
