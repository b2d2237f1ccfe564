use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use orderlab::circle::coboundary::{CoboundaryError, SearchVerdict};
use orderlab::circle::{
    check_cocycle_identity, coboundary_search, finite_orbit_search, fixed_point_from_coboundary,
    holder_witness, ActionBall, CircleMap, EulerCocycleTable, HolderOutcome, PlCircleHomeo,
};
use orderlab::circle::{Carriers, GeneratorFile};
use orderlab::decomposition::{
    decompose, decomposition_stats, minimal_decomposition, DecompositionError, Ring,
};
use orderlab::exact::rational::format_rational;
use orderlab::exact::{GroupWord, MatrixGroup, MatrixJson};
use orderlab::navas::{
    kernel_probe, KernelGrid, MapJson, ProbeVerdict, SmoothCircleMap, StabilizationCriterion,
};
use orderlab::order::action::{order_from_action, ActionOracle, LineAction, LineActionJson};
use orderlab::order::cone::{
    check_cone_axioms, heisenberg_group, integers_group, order_from_cone, z2_group, ConeCheck,
    ConeFile, RuleCone,
};
use orderlab::order::oracle::OrderOracle;
use orderlab::order::realization::{dynamical_realization, order_ball, RealizationError};
use orderlab::order::witte::{witte_pipeline, WitteOutcome, WitteReport, WitteSystem};
use orderlab::order::GreedyOracle;

use crate::input::{read_json, InputError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

pub struct Outcome {
    pub result: Value,
    pub verdict: Verdict,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor a matrix into elementary matrices.
    Decompose(DecomposeArgs),
    /// Count factors over random matrices.
    DecomposeStats(DecomposeStatsArgs),
    /// Check the cone axioms on a ball.
    OrderCheck(OrderCheckArgs),
    /// Refute an order oracle on the six unipotent generators of SL(3, Z).
    Witte(WitteArgs),
    /// Place an ordered ball on the rational line.
    Realize(RealizeArgs),
    /// Euler cocycle table of a circle action.
    Euler(EulerArgs),
    /// Bounded search for phi with delta(phi) equal to the Euler cocycle.
    Coboundary(CoboundaryArgs),
    /// Search for a finite orbit.
    Orbits(OrbitsArgs),
    /// Search for a nonidentity element with a fixed point.
    Holder(HolderArgs),
    /// Kernel probe for a smooth or rough circle map.
    NavasCheck(NavasArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Decompose(_) => "decompose",
            Command::DecomposeStats(_) => "decompose-stats",
            Command::OrderCheck(_) => "order-check",
            Command::Witte(_) => "witte",
            Command::Realize(_) => "realize",
            Command::Euler(_) => "euler",
            Command::Coboundary(_) => "coboundary",
            Command::Orbits(_) => "orbits",
            Command::Holder(_) => "holder",
            Command::NavasCheck(_) => "navas-check",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RingArg {
    Z,
    Q,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Z => Ring::Integers,
            RingArg::Q => Ring::Rationals,
        }
    }
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    ring: RingArg,
    /// Matrix file `{"n": 3, "rows": [["1","2","0"], ...]}`.
    #[arg(long)]
    input: PathBuf,
    /// Also run the brute-force minimal search.
    #[arg(long)]
    minimal: bool,
    #[arg(long, default_value_t = 1)]
    coeff_bound: i64,
    #[arg(long, default_value_t = 4)]
    length_bound: usize,
    #[arg(long, default_value_t = orderlab::decomposition::DEFAULT_NODE_BUDGET)]
    node_budget: usize,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecomposeStatsArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, value_enum, default_value_t = RingArg::Z)]
    ring: RingArg,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 20)]
    word_length: usize,
    #[arg(long, default_value_t = 3)]
    coeff_bound: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Built-in groups for files that do not carry generators.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum GroupArg {
    Integers,
    Z2,
    Heisenberg,
    Witte(i64),
}

fn parse_group(s: &str) -> Result<GroupArg, String> {
    match s {
        "integers" => Ok(GroupArg::Integers),
        "z2" => Ok(GroupArg::Z2),
        "heisenberg" => Ok(GroupArg::Heisenberg),
        _ => s
            .strip_prefix("witte:")
            .and_then(|k| k.parse().ok())
            .map(GroupArg::Witte)
            .ok_or_else(|| format!("expected integers, z2, heisenberg or witte:K, got '{s}'")),
    }
}

impl GroupArg {
    fn group(&self) -> Result<MatrixGroup, InputError> {
        Ok(match self {
            GroupArg::Integers => integers_group(),
            GroupArg::Z2 => z2_group(),
            GroupArg::Heisenberg => heisenberg_group(),
            GroupArg::Witte(k) => WitteSystem::new(*k)
                .map_err(|e| InputError::new(e.to_string()))?
                .group()
                .clone(),
        })
    }
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrderCheckArgs {
    /// Cone rule file.
    #[arg(long)]
    cone: PathBuf,
    /// Group used when the cone file has no generators.
    #[arg(long, value_parser = parse_group)]
    group: Option<GroupArg>,
    #[arg(long, alias = "ball-radius", default_value_t = 3)]
    ball: u64,
}

/// `greedy`, `cone:FILE` or `action:FILE`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum OracleArg {
    Greedy,
    Cone(PathBuf),
    Action(PathBuf),
}

fn parse_oracle(s: &str) -> Result<OracleArg, String> {
    if s == "greedy" {
        return Ok(OracleArg::Greedy);
    }
    match s.split_once(':') {
        Some(("cone", path)) if !path.is_empty() => Ok(OracleArg::Cone(path.into())),
        Some(("action", path)) if !path.is_empty() => Ok(OracleArg::Action(path.into())),
        _ => Err(format!(
            "expected greedy, cone:FILE or action:FILE, got '{s}'"
        )),
    }
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitteArgs {
    #[arg(long, default_value_t = 1)]
    k: i64,
    #[arg(long, value_parser = parse_oracle, default_value = "greedy")]
    oracle: OracleArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    witness_bound: u64,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RealizeArgs {
    /// Order from a cone rule file.
    #[arg(long, conflicts_with = "action")]
    cone: Option<PathBuf>,
    /// Order from a line action `{"maps": [{"knots": [["x","y"], ...]}], "depth": N}`.
    #[arg(long)]
    action: Option<PathBuf>,
    #[arg(long, value_parser = parse_group)]
    group: Option<GroupArg>,
    #[arg(long, alias = "ball-radius", default_value_t = 2)]
    ball: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BallModel {
    /// Distinct maps reached by words up to the radius.
    Image,
    /// Powers `g^n`, `|n| <= radius`, of a single generator, as a piece of Z.
    Integers,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EulerArgs {
    #[arg(long)]
    generators: PathBuf,
    #[arg(long, alias = "ball-radius", default_value_t = 3)]
    ball: u64,
    #[arg(long, value_enum, default_value_t = BallModel::Image)]
    model: BallModel,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CoboundaryArgs {
    #[arg(long)]
    generators: PathBuf,
    #[arg(long, alias = "ball-radius", default_value_t = 3)]
    ball: u64,
    #[arg(long, default_value_t = 2)]
    phi_bound: i64,
    #[arg(long, value_enum, default_value_t = BallModel::Image)]
    model: BallModel,
    #[arg(long, default_value_t = orderlab::circle::coboundary::DEFAULT_SEARCH_BUDGET)]
    budget: u64,
    /// Orbit radius for recovering a fixed point from phi (PL maps only).
    #[arg(long, default_value_t = 6)]
    recover_radius: u64,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitsArgs {
    #[arg(long)]
    generators: PathBuf,
    #[arg(long, default_value_t = 16)]
    max_orbit: usize,
    #[arg(long, default_value_t = 5)]
    max_word: u64,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HolderArgs {
    #[arg(long)]
    generators: PathBuf,
    #[arg(long, default_value_t = 4)]
    max_word: u64,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NavasArgs {
    /// Map file `{"fourier": {"c": [...], "d": [...]}, "rough": {...}}`.
    #[arg(long)]
    map: PathBuf,
    #[arg(long, default_value_t = 5)]
    levels: usize,
    #[arg(long, default_value_t = 256)]
    base_n: usize,
    /// Lower end of the stabilization window for the final ratio.
    #[arg(long, default_value_t = 0.8)]
    low: f64,
    /// Upper end of the stabilization window for the final ratio.
    #[arg(long, default_value_t = 1.25)]
    high: f64,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn input_err<E: std::fmt::Display>(e: E) -> InputError {
    InputError::new(e.to_string())
}

impl Command {
    /// Echo of the parsed arguments for the report envelope.
    pub fn config(&self) -> Value {
        match self {
            Command::Decompose(a) => to_value(a),
            Command::DecomposeStats(a) => to_value(a),
            Command::OrderCheck(a) => to_value(a),
            Command::Witte(a) => to_value(a),
            Command::Realize(a) => to_value(a),
            Command::Euler(a) => to_value(a),
            Command::Coboundary(a) => to_value(a),
            Command::Orbits(a) => to_value(a),
            Command::Holder(a) => to_value(a),
            Command::NavasCheck(a) => to_value(a),
        }
    }
}

pub fn run(command: &Command) -> Result<Outcome, InputError> {
    let (result, verdict) = match command {
        Command::Decompose(a) => run_decompose(a)?,
        Command::DecomposeStats(a) => run_stats(a)?,
        Command::OrderCheck(a) => run_order_check(a)?,
        Command::Witte(a) => run_witte(a)?,
        Command::Realize(a) => run_realize(a)?,
        Command::Euler(a) => run_circle(&a.generators, |c| {
            with_carriers(c, |g: &dyn ErasedCarrier| g.euler(a))
        })?,
        Command::Coboundary(a) => run_coboundary(a)?,
        Command::Orbits(a) => run_circle(&a.generators, |c| {
            with_carriers(c, |g: &dyn ErasedCarrier| Ok(g.orbits(a)))
        })?,
        Command::Holder(a) => run_circle(&a.generators, |c| {
            with_carriers(c, |g: &dyn ErasedCarrier| Ok(g.holder(a)))
        })?,
        Command::NavasCheck(a) => run_navas(a)?,
    };
    Ok(Outcome { result, verdict })
}

type Report = (Value, Verdict);

fn run_decompose(a: &DecomposeArgs) -> Result<Report, InputError> {
    let json: MatrixJson = read_json(&a.input)?;
    let m = json.to_special_linear().map_err(input_err)?;
    let d = decompose(&m, a.ring.into()).map_err(input_err)?;
    let round_trip = d.product() == m;
    let mut result = json!({
        "input": json,
        "decomposition": d.to_json(),
        "factors": d.to_json().factors,
        "count": d.count(),
        "roundTrip": round_trip,
    });
    let mut verdict = if round_trip {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    if a.minimal {
        let minimal = match minimal_decomposition(&m, a.coeff_bound, a.length_bound, a.node_budget)
        {
            Ok(Some(min)) => {
                json!({"status": "found", "decomposition": min.to_json(), "count": min.count()})
            }
            Ok(None) => {
                verdict = verdict.min_with(Verdict::Inconclusive);
                json!({"status": "noneWithinBound"})
            }
            Err(DecompositionError::BudgetExceeded(b)) => {
                verdict = verdict.min_with(Verdict::Inconclusive);
                json!({"status": "budgetExceeded", "nodeBudget": b})
            }
            Err(e) => return Err(input_err(e)),
        };
        result["minimal"] = minimal;
    }
    Ok((result, verdict))
}

impl Verdict {
    /// Keeps the more severe of two verdicts: fail over inconclusive over pass.
    fn min_with(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }
}

/// Guaranteed factor count over Q for n = 3.
pub const FIELD_COUNT_BOUND_N3: usize = 16;

fn run_stats(a: &DecomposeStatsArgs) -> Result<Report, InputError> {
    if a.n < 2 {
        return Err(InputError::new("n must be at least 2"));
    }
    let ring: Ring = a.ring.into();
    let stats = decomposition_stats(a.n, ring, a.samples, a.word_length, a.coeff_bound, a.seed)
        .map_err(input_err)?;
    let bound = (ring == Ring::Rationals && a.n == 3).then_some(FIELD_COUNT_BOUND_N3);
    let within = bound.map(|b| stats.max_count <= b);
    let mut result = to_value(&stats);
    result["countBound"] = to_value(&bound);
    result["withinCountBound"] = to_value(&within);
    let ok = stats.all_round_trips_exact && within.unwrap_or(true);
    Ok((result, if ok { Verdict::Pass } else { Verdict::Fail }))
}

fn load_cone(path: &PathBuf, group: Option<&GroupArg>) -> Result<RuleCone, InputError> {
    let file: ConeFile = read_json(path)?;
    let fallback = group.map(GroupArg::group).transpose()?;
    RuleCone::from_file(&file, fallback.as_ref()).map_err(input_err)
}

fn ball_words(group: &MatrixGroup, radius: u64) -> Vec<GroupWord> {
    group.ball(radius).into_iter().map(|(w, _)| w).collect()
}

fn run_order_check(a: &OrderCheckArgs) -> Result<Report, InputError> {
    let cone = load_cone(&a.cone, a.group.as_ref())?;
    let group = orderlab::order::cone::PositiveCone::group(&cone).clone();
    let ball = ball_words(&group, a.ball);
    match check_cone_axioms(&cone, &ball).map_err(input_err)? {
        ConeCheck::Pass(report) => Ok((json!({"status": "pass", "report": report}), Verdict::Pass)),
        ConeCheck::Violation(cert) => {
            let checked = cert.check(&group).is_ok();
            Ok((
                json!({"status": "violation", "certificate": cert, "certificateChecked": checked}),
                Verdict::Fail,
            ))
        }
    }
}

fn witte_json(report: &WitteReport, replayed: Option<bool>, checked: Option<bool>) -> Value {
    let mut out = json!({
        "k": report.k,
        "witnessBound": report.witness_bound,
        "triples": report.triples,
        "branches": report.branches.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
        "cycle": report.cycle.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "queries": report.queries,
    });
    match &report.outcome {
        WitteOutcome::Certificate(cert) => {
            out["outcome"] = json!("certificate");
            out["certificate"] = to_value(cert);
            out["certificateChecked"] = to_value(&checked);
            out["replayVerified"] = to_value(&replayed);
        }
        WitteOutcome::Inconclusive { bound, frontier } => {
            out["outcome"] = json!("inconclusive");
            out["bound"] = json!(bound);
            out["frontier"] = to_value(frontier);
        }
    }
    out
}

/// Default depth of the dynamical comparison when the action file gives none.
const DEFAULT_ACTION_DEPTH: usize = 64;

fn load_action(path: &PathBuf, group: &MatrixGroup) -> Result<ActionOracle, InputError> {
    let json: LineActionJson = read_json(path)?;
    let action = LineAction::from_json(&json).map_err(input_err)?;
    order_from_action(
        group.clone(),
        action,
        json.depth.unwrap_or(DEFAULT_ACTION_DEPTH),
    )
    .map_err(input_err)
}

fn run_witte(a: &WitteArgs) -> Result<Report, InputError> {
    let system = WitteSystem::new(a.k).map_err(input_err)?;
    let group = system.group().clone();
    let fresh = || -> Result<Box<dyn OrderOracle>, InputError> {
        Ok(match &a.oracle {
            OracleArg::Greedy => Box::new(GreedyOracle::seeded(group.clone(), a.seed)),
            OracleArg::Cone(path) => Box::new(order_from_cone(load_cone(
                path,
                Some(&GroupArg::Witte(a.k)),
            )?)),
            OracleArg::Action(path) => Box::new(load_action(path, &group)?),
        })
    };
    let report = witte_pipeline(a.k, fresh()?, a.witness_bound).map_err(input_err)?;
    let (replayed, checked) = match report.certificate() {
        Some(cert) => {
            let mut again = fresh()?;
            (
                Some(cert.replay(&mut again).is_ok()),
                Some(cert.check(&group).is_ok()),
            )
        }
        None => (None, None),
    };
    let verdict = match report.outcome {
        WitteOutcome::Certificate(_) => Verdict::Fail,
        WitteOutcome::Inconclusive { .. } => Verdict::Inconclusive,
    };
    Ok((witte_json(&report, replayed, checked), verdict))
}

fn run_realize(a: &RealizeArgs) -> Result<Report, InputError> {
    let (group, ordered) = match (&a.cone, &a.action) {
        (Some(path), None) => {
            let cone = load_cone(path, a.group.as_ref())?;
            let group = orderlab::order::cone::PositiveCone::group(&cone).clone();
            let mut oracle = order_from_cone(cone);
            let ball = ball_words(&group, a.ball);
            (group, order_ball(&mut oracle, &ball))
        }
        (None, Some(path)) => {
            let group = a
                .group
                .as_ref()
                .ok_or_else(|| InputError::new("--action needs --group"))?
                .group()?;
            let mut oracle = load_action(path, &group)?;
            let ball = ball_words(&group, a.ball);
            (group, order_ball(&mut oracle, &ball))
        }
        _ => return Err(InputError::new("give exactly one of --cone and --action")),
    };
    let realized = ordered.and_then(|o| dynamical_realization(&group, &o));
    match realized {
        Ok(r) => {
            let points: Vec<Value> = r
                .points
                .iter()
                .map(|p| json!({"word": p.word, "point": format_rational(&p.point)}))
                .collect();
            let maps: Vec<Value> = r
                .maps
                .iter()
                .map(|m| {
                    let pairs: Vec<[String; 2]> = m
                        .pairs
                        .iter()
                        .map(|(x, y)| [format_rational(x), format_rational(y)])
                        .collect();
                    json!({"generator": m.generator, "pairs": pairs})
                })
                .collect();
            Ok((
                json!({"status": "realized", "points": points, "maps": maps}),
                Verdict::Pass,
            ))
        }
        Err(e @ RealizationError::NotTotal(_)) => Ok((
            json!({"status": "undecided", "error": e.to_string()}),
            Verdict::Inconclusive,
        )),
        Err(e @ RealizationError::Group(_)) => Err(input_err(e)),
        Err(e) => Ok((
            json!({"status": "rejected", "error": e.to_string()}),
            Verdict::Fail,
        )),
    }
}

fn run_circle<F>(path: &PathBuf, f: F) -> Result<Report, InputError>
where
    F: FnOnce(&Carriers) -> Result<Report, InputError>,
{
    let file: GeneratorFile = read_json(path)?;
    let carriers = Carriers::from_specs(file.specs()).map_err(input_err)?;
    f(&carriers)
}

/// Runs `f` on whichever carrier the file describes.
fn with_carriers<F>(c: &Carriers, f: F) -> Result<Report, InputError>
where
    F: for<'a> FnOnce(&'a dyn ErasedCarrier) -> Result<Report, InputError>,
{
    let (mut result, verdict) = match c {
        Carriers::Pl(g) => f(&Erased(g.as_slice()))?,
        Carriers::Mobius(g) => f(&Erased(g.as_slice()))?,
    };
    result["carrier"] = json!(match c {
        Carriers::Pl(_) => "pl",
        Carriers::Mobius(_) => "mobius",
    });
    Ok((result, verdict))
}

/// Object-safe view of a generator list, so closures need not be generic.
pub trait ErasedCarrier {
    fn euler(&self, args: &EulerArgs) -> Result<Report, InputError>;
    fn orbits(&self, args: &OrbitsArgs) -> Report;
    fn holder(&self, args: &HolderArgs) -> Report;
    fn coboundary(&self, args: &CoboundaryArgs) -> Result<Report, InputError>;
}

struct Erased<'a, M>(&'a [M]);

fn build_ball<M: CircleMap>(
    generators: &[M],
    radius: u64,
    model: BallModel,
) -> Result<ActionBall<M>, InputError> {
    match model {
        BallModel::Image => Ok(ActionBall::image(generators, radius)),
        BallModel::Integers => match generators {
            [g] => Ok(ActionBall::integers(g, radius)),
            _ => Err(InputError::new(
                "the integers model takes exactly one generator",
            )),
        },
    }
}

fn evaluate<M: CircleMap>(generators: &[M], word: &GroupWord) -> M {
    let mut m = generators[0].identity_like();
    for l in word.letters() {
        let g = &generators[l.generator];
        let step = if l.exponent > 0 {
            g.clone()
        } else {
            g.inverse()
        };
        for _ in 0..l.exponent.unsigned_abs() {
            m = m.compose(&step);
        }
    }
    m
}

impl<M: CircleMap> ErasedCarrier for Erased<'_, M> {
    fn euler(&self, a: &EulerArgs) -> Result<Report, InputError> {
        let ball = build_ball(self.0, a.ball, a.model)?;
        let table = EulerCocycleTable::from_ball(&ball);
        let report = check_cocycle_identity(&table, &table.closed_triples()).map_err(input_err)?;
        let in_range = table.values_in_range();
        let verdict = if report.passed() && in_range {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Ok((
            json!({"ballSize": ball.len(), "table": table, "cocycle": report, "valuesInRange": in_range}),
            verdict,
        ))
    }

    fn orbits(&self, a: &OrbitsArgs) -> Report {
        match finite_orbit_search(self.0, a.max_orbit, a.max_word) {
            Some(orbit) => (
                json!({"found": true, "size": orbit.points.len(), "seed": orbit.seed, "points": orbit.points}),
                Verdict::Pass,
            ),
            None => (json!({"found": false}), Verdict::Inconclusive),
        }
    }

    fn holder(&self, a: &HolderArgs) -> Report {
        let outcome = holder_witness(self.0, a.max_word);
        let mut result = to_value(&outcome);
        let verdict = match &outcome {
            HolderOutcome::Found { word, point, .. } => {
                let m = evaluate(self.0, word);
                let verified = !m.is_identity() && m.apply(point) == *point;
                result["verified"] = json!(verified);
                if verified {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
            HolderOutcome::Abelian => Verdict::Pass,
            HolderOutcome::NotFound { .. } => Verdict::Inconclusive,
        };
        (result, verdict)
    }

    fn coboundary(&self, a: &CoboundaryArgs) -> Result<Report, InputError> {
        let ball = build_ball(self.0, a.ball, a.model)?;
        let search = match coboundary_search(&ball, a.phi_bound, a.budget) {
            Ok(s) => s,
            Err(e @ CoboundaryError::BudgetExceeded(_)) => {
                return Ok((
                    json!({"status": "budgetExceeded", "error": e.to_string()}),
                    Verdict::Inconclusive,
                ))
            }
            Err(e) => return Err(input_err(e)),
        };
        let mut result = json!({
            "status": search.verdict,
            "ballSize": ball.len(),
            "tableIsZero": search.table.is_zero(),
            "constraints": search.constraints,
            "nodes": search.nodes,
        });
        if let Some(phi) = &search.phi {
            result["phi"] = to_value(&phi.to_json(ball.words()));
        }
        let verdict = match search.verdict {
            SearchVerdict::Found => Verdict::Pass,
            SearchVerdict::NoneWithinBound => Verdict::Inconclusive,
        };
        Ok((result, verdict))
    }
}

fn run_coboundary(a: &CoboundaryArgs) -> Result<Report, InputError> {
    run_circle(&a.generators, |c| {
        let (mut result, verdict) = with_carriers(c, |g: &dyn ErasedCarrier| g.coboundary(a))?;
        if let (Carriers::Pl(gens), true) = (c, result.get("phi").is_some()) {
            result["recovery"] = recover(gens, a)?;
        }
        Ok((result, verdict))
    })
}

/// Reruns the search on PL carriers and recovers the fixed point from phi.
fn recover(gens: &[PlCircleHomeo], a: &CoboundaryArgs) -> Result<Value, InputError> {
    let ball = build_ball(gens, a.ball, a.model)?;
    let search = coboundary_search(&ball, a.phi_bound, a.budget).map_err(input_err)?;
    let Some(phi) = search.phi else {
        return Ok(Value::Null);
    };
    Ok(
        match fixed_point_from_coboundary(&ball, &phi, a.recover_radius, None) {
            Ok(rec) => to_value(&rec),
            Err(e) => json!({"error": e.to_string()}),
        },
    )
}

fn run_navas(a: &NavasArgs) -> Result<Report, InputError> {
    let json: MapJson = read_json(&a.map)?;
    let g = SmoothCircleMap::from_json(&json).map_err(input_err)?;
    let grid = KernelGrid::doubling(a.levels, a.base_n).map_err(input_err)?;
    let criterion = StabilizationCriterion {
        low: a.low,
        high: a.high,
    };
    let report = kernel_probe(&g, &grid, criterion).map_err(input_err)?;
    let verdict = match report.verdict {
        ProbeVerdict::Stabilized => Verdict::Pass,
        ProbeVerdict::Growing => Verdict::Fail,
        ProbeVerdict::Indeterminate => Verdict::Inconclusive,
    };
    let mut result = to_value(&report);
    result["verdict"] = to_value(&report.verdict);
    Ok((result, verdict))
}
