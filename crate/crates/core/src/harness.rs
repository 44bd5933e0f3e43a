//! Batch plumbing: random instance generation, solver dispatch and the
//! certification table that compares greedy coverage with oracle optima.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csc2::{solve_2csc_tc_ge_tt, solve_2csc_tt_gt_tc};
use crate::error::{Error, Result};
use crate::instance::{regime_of, Fleet, Instance, Point};
use crate::kernel::{approximation_bound, KernelConfig};
use crate::oracle::{opt_restricted, opt_true};
use crate::rcsc::{solve_rcsc_tc_ge_tt, solve_rcsc_tt_gt_tc, GreedyTrace};
use crate::route::{Family, Schedule, Variant};
use crate::verify::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub min: usize,
    pub max: usize,
}

impl Span {
    pub const fn new(min: usize, max: usize) -> Self {
        Span { min, max }
    }

    fn range(self) -> RangeInclusive<usize> {
        self.min..=self.max
    }
}

/// A batch of random instances and what to run on them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub targets: Span,
    pub chargers: usize,
    pub sensors: Span,
    /// Side of the square holding every node.
    pub side: f64,
    pub speed: f64,
    pub sweep_period: f64,
    pub charge_period: f64,
    /// Instance `i` uses seed `base_seed + i`.
    pub seeds: usize,
    pub base_seed: u64,
    pub variants: Vec<Variant>,
    #[serde(default)]
    pub kernel: KernelConfig,
}

impl ExperimentSpec {
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Input(msg));
        if self.targets.min > self.targets.max || self.sensors.min > self.sensors.max {
            return bad("target and sensor ranges must have min <= max".into());
        }
        if self.sensors.min == 0 {
            return bad("every instance needs at least one sensor".into());
        }
        if !(1..=2).contains(&self.chargers) {
            return bad(format!("chargers must be 1 or 2, got {}", self.chargers));
        }
        for (name, v) in [("side", self.side), ("speed", self.speed)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        let Some(regime) = regime_of(self.sweep_period, self.charge_period) else {
            return bad(format!(
                "periods T_t = {} and T_c = {} are not integer multiples of each other",
                self.sweep_period, self.charge_period
            ));
        };
        for &v in &self.variants {
            if v.charge_ge_sweep() != matches!(regime, crate::instance::Regime::ChargeGeSweep { .. }) {
                return bad(format!("variant {v} does not match the period regime"));
            }
            if v.family() == Family::Csc2 && self.chargers != 2 {
                return bad(format!("variant {v} requires exactly 2 chargers"));
            }
        }
        self.kernel.check()
    }

    pub fn seed(&self, index: usize) -> u64 {
        self.base_seed.wrapping_add(index as u64)
    }

    /// Instance number `index`: sizes and coordinates drawn uniformly.
    pub fn instance(&self, index: usize) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed(index));
        let n = rng.gen_range(self.targets.range());
        let m = rng.gen_range(self.sensors.range());
        let mut point = || Point::new(rng.gen_range(0.0..self.side), rng.gen_range(0.0..self.side));
        let targets: Vec<Point> = (0..n).map(|_| point()).collect();
        let chargers: Vec<Point> = (0..self.chargers).map(|_| point()).collect();
        let fleet = Fleet {
            sensors: m,
            speed: self.speed,
            sweep_period: self.sweep_period,
            charge_period: self.charge_period,
        };
        Instance::euclidean(&targets, &chargers, fleet)
    }

    pub fn instance_id(&self, index: usize) -> String {
        format!("seed-{}", self.seed(index))
    }
}

/// Every instance of the batch with its id.
pub fn gen(spec: &ExperimentSpec) -> Result<Vec<(String, Instance)>> {
    spec.check()?;
    Ok((0..spec.seeds).map(|i| (spec.instance_id(i), spec.instance(i))).collect())
}

/// Runs the greedy solver for `variant`.
pub fn solve(inst: &Instance, variant: Variant, cfg: &KernelConfig) -> Result<(Schedule, GreedyTrace)> {
    match variant {
        Variant::RcscTcGeTt => solve_rcsc_tc_ge_tt(inst, cfg),
        Variant::RcscTtGtTc => solve_rcsc_tt_gt_tc(inst, cfg),
        Variant::Csc2TcGeTt => solve_2csc_tc_ge_tt(inst, cfg),
        Variant::Csc2TtGtTc => solve_2csc_tt_gt_tc(inst, cfg),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The oracle the guarantee is measured against was out of its limits.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertRow {
    pub instance_id: String,
    pub variant: Variant,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub multiple: usize,
    pub greedy: usize,
    pub opt_r: Option<usize>,
    pub opt_true: Option<usize>,
    pub bound: f64,
    pub verdict: Verdict,
}

fn ratio(greedy: usize, opt: Option<usize>) -> Option<f64> {
    opt.map(|o| if o == 0 { 1.0 } else { greedy as f64 / o as f64 })
}

impl CertRow {
    pub fn ratio_r(&self) -> Option<f64> {
        ratio(self.greedy, self.opt_r)
    }

    pub fn ratio_true(&self) -> Option<f64> {
        ratio(self.greedy, self.opt_true)
    }

    /// The optimum the guarantee for this variant is stated against: the
    /// restricted family for `rcsc_tc_ge_tt`, all crew schedules otherwise.
    pub fn reference(&self) -> Option<usize> {
        match self.variant {
            Variant::RcscTcGeTt => self.opt_r,
            _ => self.opt_true,
        }
    }
}

/// Runs solver and oracles on one instance.
pub fn certify_instance(id: &str, inst: &Instance, variant: Variant, cfg: &KernelConfig) -> Result<CertRow> {
    let params = variant.check(inst)?;
    let (schedule, _) = solve(inst, variant, cfg)?;
    let report = verify(inst, &schedule)?;
    if !report.feasible {
        return Err(Error::Contract(format!("{id}: solver output fails verification: {:?}", report.issues)));
    }
    let greedy = schedule.covered.len();
    let restricted = opt_restricted(inst, variant)?;
    let truth = opt_true(inst, variant)?;
    let opt_r = (!restricted.truncated).then_some(restricted.opt_value);
    let opt_t = (!truth.truncated).then_some(truth.opt_value);
    let multiple = params.multiple();
    let bound = approximation_bound(variant, multiple, 1.0, 1.0, 1.0)?;
    let mut row = CertRow {
        instance_id: id.to_string(),
        variant,
        n: inst.n_targets(),
        k: inst.n_chargers(),
        m: inst.sensors(),
        multiple,
        greedy,
        opt_r,
        opt_true: opt_t,
        bound,
        verdict: Verdict::Skipped,
    };
    row.verdict = match row.reference() {
        None => Verdict::Skipped,
        Some(opt) if greedy as f64 + 1e-9 >= bound * opt as f64 => Verdict::Pass,
        Some(_) => Verdict::Fail,
    };
    Ok(row)
}

/// Certification rows for every instance and variant of the batch, in
/// instance order then variant order.
pub fn certify(spec: &ExperimentSpec) -> Result<Vec<CertRow>> {
    let instances = gen(spec)?;
    let jobs: Vec<(usize, Variant)> =
        (0..instances.len()).flat_map(|i| spec.variants.iter().map(move |&v| (i, v))).collect();
    jobs.par_iter()
        .map(|&(i, v)| certify_instance(&instances[i].0, &instances[i].1, v, &spec.kernel))
        .collect()
}

/// Aggregate over certification rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertSummary {
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Over rows with a reference optimum, greedy / reference.
    pub min_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
}

pub fn summarize(rows: &[CertRow]) -> CertSummary {
    let count = |v| rows.iter().filter(|r| r.verdict == v).count();
    let ratios: Vec<f64> = rows.iter().filter_map(|r| ratio(r.greedy, r.reference())).collect();
    CertSummary {
        rows: rows.len(),
        passed: count(Verdict::Pass),
        failed: count(Verdict::Fail),
        skipped: count(Verdict::Skipped),
        min_ratio: ratios.iter().copied().reduce(f64::min),
        mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
    }
}

pub const CSV_HEADER: [&str; 13] = [
    "instance_id",
    "variant",
    "N",
    "K",
    "M",
    "Q_or_Qhat",
    "greedy",
    "opt_R",
    "opt_true",
    "bound",
    "ratio_R",
    "ratio_true",
    "pass",
];

/// Renders rows as CSV with fixed six-digit floats; missing values are empty.
pub fn to_csv(rows: &[CertRow]) -> Result<Vec<u8>> {
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    let fixed = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        let verdict = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        };
        w.write_record([
            r.instance_id.clone(),
            r.variant.name().to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.m.to_string(),
            r.multiple.to_string(),
            r.greedy.to_string(),
            opt(r.opt_r),
            opt(r.opt_true),
            format!("{:.6}", r.bound),
            fixed(r.ratio_r()),
            fixed(r.ratio_true()),
            verdict.to_string(),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}
