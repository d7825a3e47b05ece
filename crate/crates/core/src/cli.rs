//! Command-line interface: argument parsing and command dispatch.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::decomposition::{
    check_property_s, decompose, full_chain, full_chain_seeded, mixed_cell_count_identity, verify_nonnegativity,
    ChainReport,
};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::family::{FamilyKind, SubsetFamily};
use crate::gen::{gen, Profile};
use crate::instance::Instance;
use crate::mixedvolume::{brick_identity, mixed_cell_volume, mixed_volume, MvMethod};
use crate::oracle;
use crate::point::Support;
use crate::polytope::Polytope;
use crate::rational::Rational;
use crate::report::Report;
use crate::subdivision::{MixedSubdivision, MAX_RETRIES};
use crate::tropical::{
    bounds_report, brick_discrete, discrete_mixed_volume, kouchnirenko, patchwork_count, search_t, solve, SignMode,
    TropicalPolynomial,
};

#[derive(Debug, Parser)]
#[command(name = "mixdecomp", version, about = "Discrete and classical mixed volumes, mixed subdivisions and tropical root counts")]
pub struct Cli {
    /// Seed for every random choice (lifts, directions, signs). Defaults to the
    /// instance's seed, then 0.
    #[arg(long, global = true, env = "MIXDECOMP_SEED")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discrete mixed volume D and the Kouchnirenko number.
    Dmv { instance: PathBuf },
    /// D against its upper bounds.
    Bounds { instance: PathBuf },
    /// Classical mixed volume of the hulls of the supports.
    Mv {
        instance: PathBuf,
        #[arg(long, default_value = "cells", value_parser = parse_method)]
        method: MvMethod,
    },
    /// Cells of the mixed subdivision induced by the instance's lifts (or seeded lifts).
    Cells { instance: PathBuf },
    /// Splits N(W) along the subdivision in one direction, or along a full chain.
    Decompose {
        instance: PathBuf,
        #[arg(long)]
        chain: bool,
        #[arg(long, value_parser = parse_family)]
        family: Option<FamilyKind>,
    },
    /// Checks one of the identities or inequalities on an instance.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        instance: PathBuf,
        #[arg(long, value_parser = parse_family)]
        family: Option<FamilyKind>,
    },
    /// Tropical polynomial systems.
    Tropical {
        #[command(subcommand)]
        action: TropicalCommand,
    },
    /// Nonempty mixed cells for the instance's signs, or a search over lifts and signs.
    #[command(args_conflicts_with_subcommands = true)]
    Patchwork {
        instance: Option<PathBuf>,
        #[command(subcommand)]
        action: Option<PatchworkCommand>,
    },
    /// Brute-force reference values.
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        instance: PathBuf,
    },
    /// Prints a seeded random instance.
    Gen {
        #[arg(long, value_parser = parse_profile)]
        profile: Profile,
    },
}

#[derive(Debug, Subcommand)]
pub enum TropicalCommand {
    /// Solutions dual to the mixed cells; uses coefficients, lifts, or seeded coefficients.
    Solve { instance: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum PatchworkCommand {
    /// Best number of nonempty mixed cells over sampled lifts and signs.
    Search {
        instance: PathBuf,
        #[arg(long, default_value_t = 64)]
        lift_samples: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        signs: SignChoice,
        /// Sign assignments per lift sample in random mode.
        #[arg(long, default_value_t = 256)]
        sign_samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Nonnegativity,
    Kouchnirenko,
    Mixedcells,
    Decomposition,
    Brick,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignChoice {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Dmv,
    Mv,
    Lattice,
}

fn parse_method(s: &str) -> std::result::Result<MvMethod, String> {
    MvMethod::parse(s).ok_or_else(|| format!("unknown method {s:?} (cells, altvol, lattice)"))
}

fn parse_family(s: &str) -> std::result::Result<FamilyKind, String> {
    FamilyKind::parse(s).ok_or_else(|| {
        let names: Vec<&str> = FamilyKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown family {s:?} ({})", names.join(", "))
    })
}

fn parse_profile(s: &str) -> std::result::Result<Profile, String> {
    Profile::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Profile::ALL.iter().map(|p| p.name()).collect();
        format!("unknown profile {s:?} ({})", names.join(", "))
    })
}

/// What a command prints.
pub enum Output {
    Report(Report),
    Instance(Instance),
}

pub fn run(cli: &Cli) -> Result<Output> {
    if let Command::Gen { profile } = &cli.command {
        return Ok(Output::Instance(gen(*profile, cli.seed.unwrap_or(0))));
    }
    let path = instance_path(&cli.command);
    let inst = Instance::load(path)?;
    let seed = cli.seed.or(inst.seed).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(command_line(&cli.command), seed);
    let supports = inst.to_supports()?;
    match &cli.command {
        Command::Dmv { .. } => {
            let d = report.timed("dmv", || discrete_mixed_volume(&supports))?;
            let k = kouchnirenko(&supports);
            report.set("D", d);
            report.set("kouchnirenko", k);
            report.check_le("D <= kouchnirenko", d, k);
            if let Some(sup) = inst.superset_supports()? {
                report.set("superset_D", discrete_mixed_volume(&sup)?);
            }
        }
        Command::Bounds { .. } => {
            let b = report.timed("bounds", || bounds_report(&supports))?;
            add_bounds(&mut report, &b);
            report.set("bounds", &b);
        }
        Command::Mv { method, .. } => {
            let polys = hulls(&supports)?;
            let mv = report.timed(method.name(), || mixed_volume(&polys, *method, &mut rng))?;
            report.set("MV", &mv);
            report.set("method", method.name());
            let mut all = serde_json::Map::new();
            all.insert(method.name().to_string(), json!(mv));
            for m in MvMethod::ALL {
                if m == *method || (m == MvMethod::LatticePoints && !polys.iter().all(Polytope::is_lattice)) {
                    continue;
                }
                let v = report.timed(m.name(), || mixed_volume(&polys, m, &mut rng))?;
                report.check_eq(format!("{} = {}", method.name(), m.name()), &mv, &v);
                all.insert(m.name().to_string(), json!(v));
            }
            report.set("by_method", all);
        }
        Command::Cells { .. } => {
            let sub = report.timed("subdivision", || subdivision(&inst, false, &mut rng))?;
            report.set("cells", cells_json(&sub));
            report.set("pure", sub.is_pure());
            report.set("mixed_cells", sub.mixed_cells().count());
            if sub.system().r() == sub.ambient() {
                report.set("mixed_volume", mixed_cell_volume(&sub));
            }
            report.check_eq("pure", sub.is_pure(), true);
        }
        Command::Decompose { chain, family, .. } => {
            let kind = family.or(inst.family).unwrap_or(FamilyKind::Minkowski);
            let sub = report.timed("subdivision", || subdivision(&inst, true, &mut rng))?;
            let fam = SubsetFamily::build(kind, &supports, Some(&sub))?;
            report.set("family", kind);
            report.set("N", fam.alternating_sum());
            if *chain {
                let c = report.timed("chain", || chain_for(&inst, &fam, &sub, &mut rng))?;
                add_chain(&mut report, &c);
            } else {
                let step = report.timed("decompose", || step_for(&inst, &fam, &sub, &mut rng))?;
                report.check_eq("N = A + |Exc| + N_delta", step.1.n, step.1.a + step.1.excessive.len() as i64 + step.1.n_delta);
                report.check_eq("N = A + E + N_delta (signed)", step.1.n, step.1.a + step.1.excessive_signed + step.1.n_delta);
                report.set("delta", &step.0);
                report.set("step", &step.1);
            }
        }
        Command::Verify { theorem, family, .. } => verify(*theorem, *family, &inst, &supports, &mut report, &mut rng)?,
        Command::Tropical { action: TropicalCommand::Solve { .. } } => {
            let polys = tropical_system(&inst, &supports, &mut rng)?;
            let sol = report.timed("solve", || solve(&polys))?;
            report.check_le("solutions <= D", sol.count as i64, sol.d);
            report.set("coefficients", polys.iter().map(|p| p.coefficients().to_vec()).collect::<Vec<_>>());
            report.set("solutions", &sol);
        }
        Command::Patchwork { action: None, .. } => {
            let polys = tropical_system(&inst, &supports, &mut rng)?;
            let signs = inst.signs.as_ref().ok_or_else(|| Error::Parse {
                location: "signs".into(),
                message: "patchwork needs a sign for every monomial".into(),
            })?;
            let p = report.timed("patchwork", || patchwork_count(&polys, signs))?;
            report.check_le("nonempty <= mixed cells", p.nonempty_mixed_cells, p.mixed_cells);
            report.check_le("mixed cells <= D", p.mixed_cells as i64, p.d);
            report.set("patchwork", &p);
        }
        Command::Patchwork { action: Some(PatchworkCommand::Search { lift_samples, signs, sign_samples, .. }), .. } => {
            let mode = match signs {
                SignChoice::Exhaustive => SignMode::Exhaustive,
                SignChoice::Random => SignMode::Random(*sign_samples),
            };
            let s = report.timed("search", || search_t(&supports, *lift_samples, mode, &mut rng))?;
            report.check_le("best <= D", s.best_count as i64, s.upper_bound);
            report.set("search", &s);
        }
        Command::Oracle { kind, .. } => match kind {
            OracleKind::Dmv => {
                let d = report.timed("oracle", || oracle::dmv(&supports))?;
                let m = discrete_mixed_volume(&supports)?;
                report.set("D", d);
                report.check_eq("oracle = module", d, m);
            }
            OracleKind::Mv => {
                let v = report.timed("oracle", || oracle::mv(&supports))?;
                let m = mixed_volume(&hulls(&supports)?, MvMethod::AlternatingVolume, &mut rng)?;
                report.set("MV", &v);
                report.check_eq("oracle = module", v, m);
            }
            OracleKind::Lattice => {
                let v = report.timed("oracle", || oracle::lattice_mv(&supports))?;
                let m = mixed_volume(&hulls(&supports)?, MvMethod::LatticePoints, &mut rng)?;
                report.set("MV", v);
                report.check_eq("oracle = module", Rational::from_int(v), m);
            }
        },
        Command::Gen { .. } => unreachable!("handled above"),
    }
    Ok(Output::Report(report))
}

fn instance_path(cmd: &Command) -> &Path {
    match cmd {
        Command::Dmv { instance }
        | Command::Bounds { instance }
        | Command::Mv { instance, .. }
        | Command::Cells { instance }
        | Command::Decompose { instance, .. }
        | Command::Verify { instance, .. }
        | Command::Tropical { action: TropicalCommand::Solve { instance } }
        | Command::Patchwork { action: Some(PatchworkCommand::Search { instance, .. }), .. }
        | Command::Oracle { instance, .. } => instance,
        Command::Patchwork { instance: Some(instance), action: None } => instance,
        Command::Patchwork { instance: None, action: None } => Path::new(""),
        Command::Gen { .. } => Path::new(""),
    }
}

fn command_line(cmd: &Command) -> String {
    match cmd {
        Command::Dmv { .. } => "dmv".into(),
        Command::Bounds { .. } => "bounds".into(),
        Command::Mv { method, .. } => format!("mv --method {method}"),
        Command::Cells { .. } => "cells".into(),
        Command::Decompose { chain, .. } => if *chain { "decompose --chain" } else { "decompose" }.into(),
        Command::Verify { theorem, .. } => {
            format!("verify --theorem {}", theorem.to_possible_value().expect("named").get_name())
        }
        Command::Tropical { .. } => "tropical solve".into(),
        Command::Patchwork { action: None, .. } => "patchwork".into(),
        Command::Patchwork { action: Some(_), .. } => "patchwork search".into(),
        Command::Oracle { kind, .. } => format!("oracle {}", kind.to_possible_value().expect("named").get_name()),
        Command::Gen { profile } => format!("gen --profile {profile}"),
    }
}

fn hulls(supports: &[Support]) -> Result<Vec<Polytope>> {
    supports.iter().map(|s| Polytope::from_points(s.points())).collect()
}

/// The subdivision from the instance's lifts, or a seeded generic one.
pub fn subdivision<R: Rng>(inst: &Instance, hereditary: bool, rng: &mut R) -> Result<MixedSubdivision> {
    match inst.lifted_system()? {
        Some(sys) => MixedSubdivision::build(sys),
        None => MixedSubdivision::generic(inst.to_supports()?, hereditary, rng),
    }
}

fn cells_json(sub: &MixedSubdivision) -> serde_json::Value {
    sub.cells()
        .iter()
        .map(|c| {
            json!({
                "normal": c.normal,
                "summands": c.summands,
                "dims": c.dims,
                "mixed": c.is_mixed(),
                "volume": c.total().volume(),
            })
        })
        .collect()
}

fn step_for<R: Rng>(
    inst: &Instance,
    fam: &SubsetFamily,
    sub: &MixedSubdivision,
    rng: &mut R,
) -> Result<(Direction, crate::decomposition::StepReport)> {
    if let Some(d) = inst.deltas.as_ref().and_then(|ds| ds.first()) {
        return Ok((d.clone(), decompose(fam, sub, d.as_slice())?));
    }
    let mut last = Error::RetryCap(MAX_RETRIES);
    for _ in 0..MAX_RETRIES {
        let d = Direction::random(sub.ambient(), rng);
        match decompose(fam, sub, d.as_slice()) {
            Ok(s) => return Ok((d, s)),
            Err(e @ Error::Genericity { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn chain_for<R: Rng>(inst: &Instance, fam: &SubsetFamily, sub: &MixedSubdivision, rng: &mut R) -> Result<ChainReport> {
    match &inst.deltas {
        Some(ds) if ds.len() == fam.ambient() => full_chain(fam, sub, ds),
        Some(ds) => Err(Error::Parse {
            location: "deltas".into(),
            message: format!("a chain needs {} directions, got {}", fam.ambient(), ds.len()),
        }),
        None => full_chain_seeded(fam, sub, rng),
    }
}

fn add_chain(report: &mut Report, c: &ChainReport) {
    let s = &c.step;
    report.check_eq("N = A + |Exc| + N_delta", s.n, s.a + s.excessive.len() as i64 + s.n_delta);
    report.check_eq("N = A + E + N_delta (signed)", s.n, s.a + s.excessive_signed + s.n_delta);
    report.check("chain non-increasing", c.non_increasing(), &c.chain, "non-increasing");
    report.check_eq("chain by recursion = chain by iterated lower parts", &c.chain_recursive, &c.chain);
    report.check_eq("last chain entry = terminal formula", c.chain.last().copied(), Some(c.terminal.value));
    report.set("chain", c);
}

fn add_bounds(report: &mut Report, b: &crate::tropical::BoundsReport) {
    report.check_le("D <= kouchnirenko", b.d, b.kouchnirenko);
    if let Some(eq) = b.general_position_equality {
        report.check("general position: D = kouchnirenko", eq, b.d, b.kouchnirenko);
    }
    if let Some(bound) = b.same_support_bound {
        report.check_le("same support: D <= (|W|-1)(|W|-2)/2", b.d, bound);
    }
}

fn item_number(kind: FamilyKind) -> usize {
    match kind {
        FamilyKind::Minkowski => 1,
        FamilyKind::Lattice => 2,
        FamilyKind::InteriorMinkowski => 3,
        FamilyKind::InteriorLattice => 4,
        FamilyKind::Vertices => 5,
        FamilyKind::RelativeInteriorLattice | FamilyKind::Custom => 0,
    }
}

fn verify<R: Rng>(
    theorem: Theorem,
    family: Option<FamilyKind>,
    inst: &Instance,
    supports: &[Support],
    report: &mut Report,
    rng: &mut R,
) -> Result<()> {
    match theorem {
        Theorem::Nonnegativity => {
            let lattice = supports.iter().all(Support::is_integral);
            let kinds: Vec<FamilyKind> = match family.or(inst.family) {
                Some(k) => vec![k],
                None => [
                    FamilyKind::Minkowski,
                    FamilyKind::Lattice,
                    FamilyKind::InteriorMinkowski,
                    FamilyKind::InteriorLattice,
                    FamilyKind::Vertices,
                ]
                .into_iter()
                .filter(|k| lattice || !k.needs_lattice())
                .collect(),
            };
            let mut items = Vec::new();
            for kind in kinds {
                let r = report.timed(kind.name(), || verify_nonnegativity(kind, supports, rng))?;
                let item = item_number(kind);
                report.check_le(format!("item {item} ({kind}): 0 <= value"), 0, r.value);
                report.check_le(format!("item {item} ({kind}): chain bound <= value"), r.chain_bound, r.value);
                report.check_le(format!("item {item} ({kind}): 0 <= chain bound"), 0, r.chain_bound);
                items.push(r);
            }
            report.set("items", items);
        }
        Theorem::Kouchnirenko => {
            let b = bounds_report(supports)?;
            add_bounds(report, &b);
            report.set("bounds", &b);
        }
        Theorem::Mixedcells => {
            let sub = report.timed("subdivision", || subdivision(inst, false, rng))?;
            let m = mixed_cell_count_identity(&sub)?;
            report.check_eq("sum (-1)^(n-|I|) |V_I| = mixed cells", m.lhs, m.rhs);
            report.set("identity", m);
        }
        Theorem::Decomposition => {
            let kind = family.or(inst.family).unwrap_or(FamilyKind::Minkowski);
            let sub = report.timed("subdivision", || subdivision(inst, true, rng))?;
            let fam = SubsetFamily::build(kind, supports, Some(&sub))?;
            let s = report.timed("property S", || check_property_s(&fam, &sub))?;
            report.check("property S", s.pass, s.violation.clone(), serde_json::Value::Null);
            report.set("property_s", &s);
            report.set("family", kind);
            let c = report.timed("chain", || chain_for(inst, &fam, &sub, rng))?;
            add_chain(report, &c);
        }
        Theorem::Brick => {
            let mut last = Error::RetryCap(MAX_RETRIES);
            let explicit = inst.deltas.as_ref().and_then(|d| d.first()).cloned();
            for _ in 0..MAX_RETRIES {
                let delta = explicit.clone().unwrap_or_else(|| Direction::random(inst.dim, rng));
                let attempt = (|| -> Result<()> {
                    let disc = brick_discrete(supports, &delta)?;
                    report.check_eq("D = shifted sum points", disc.d, disc.shifted_sum_points as i64);
                    report.check_eq("D = prod (|W_i| - 1)", disc.d, disc.kouchnirenko);
                    report.set("discrete", &disc);
                    if supports.iter().all(Support::is_integral) {
                        let b = brick_identity(supports, &delta)?;
                        report.check_eq("MV = Vol", &b.mv, &b.volume);
                        report.check_eq("Vol = shifted lattice points", b.volume.clone(), Rational::from_int(b.shifted_lattice_points as i64));
                        report.set("classical", &b);
                    }
                    report.set("delta", &delta);
                    Ok(())
                })();
                match attempt {
                    Ok(()) => return Ok(()),
                    Err(e @ Error::Genericity { .. }) if explicit.is_none() => {
                        report.assertions.clear();
                        last = e;
                    }
                    Err(e) => return Err(e),
                }
            }
            return Err(last);
        }
    }
    Ok(())
}

fn tropical_system<R: Rng>(inst: &Instance, supports: &[Support], rng: &mut R) -> Result<Vec<TropicalPolynomial>> {
    let build = |coeffs: Vec<Vec<Rational>>| -> Result<Vec<TropicalPolynomial>> {
        supports.iter().zip(coeffs).map(|(s, c)| TropicalPolynomial::new(s.clone(), c)).collect()
    };
    if let Some(c) = &inst.coefficients {
        return build(c.clone());
    }
    if let Some(l) = &inst.lifts {
        return build(l.iter().map(|row| row.iter().map(|x| -x).collect()).collect());
    }
    for _ in 0..MAX_RETRIES {
        let coeffs: Vec<Vec<Rational>> = supports
            .iter()
            .map(|s| (0..s.len()).map(|_| Rational::from_int(rng.gen_range(-(1 << 20)..(1 << 20)))).collect())
            .collect();
        let polys = build(coeffs)?;
        let sys = crate::tropical::lifted_system(&polys)?;
        if MixedSubdivision::build(sys)?.is_pure() {
            return Ok(polys);
        }
    }
    Err(Error::RetryCap(MAX_RETRIES))
}

/// Exit status for a finished command: 0 when every assertion passes, 1 otherwise.
pub fn exit_code(out: &Output) -> i32 {
    match out {
        Output::Report(r) if !r.all_pass() => 1,
        _ => 0,
    }
}
