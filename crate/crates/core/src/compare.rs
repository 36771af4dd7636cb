//! Randomized sweeps: rank the bounds per ensemble, count winners, and check
//! the inequalities relating the bounds on every trial.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::bounds::{all_bounds, helstrom, pairwise_fidelities, Bound, BoundReport, CONSISTENCY_SLACK};
use crate::ensemble::{structured_to_ensemble, Ensemble};
use crate::error::{Error, Result};
use crate::exact::{solve_commuting, solve_structured, solve_two_state};
use crate::json;
use crate::matrix::{trace_norm, Tolerances};
use crate::random::{sample_commuting_ensemble, sample_ensemble, sample_structured, Sampler};

/// Resolution at which two bound values count as equal in a ranking.
pub const RANK_RESOLUTION: f64 = 1e-9;

/// Bounds grouped by value, largest first; each group is sorted by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub groups: Vec<Vec<Bound>>,
}

impl Ranking {
    /// Parses `"L0=L1>L4>L3"`. Group members may appear in any order.
    pub fn parse(s: &str) -> Option<Self> {
        let mut groups = Vec::new();
        for part in s.split('>') {
            let mut g = part
                .split('=')
                .map(|b| Bound::parse(b.trim()))
                .collect::<Option<Vec<_>>>()?;
            g.sort();
            groups.push(g);
        }
        Some(Self { groups })
    }

    pub fn winners(&self) -> &[Bound] {
        self.groups.first().map(Vec::as_slice).unwrap_or(&[])
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self
            .groups
            .iter()
            .map(|g| g.iter().map(|b| b.name()).collect::<Vec<_>>().join("="))
            .collect::<Vec<_>>()
            .join(">");
        f.write_str(&text)
    }
}

/// Orders the bounds of `report` from largest to smallest.
///
/// Sorted neighbours closer than [`RANK_RESOLUTION`] share a group.
pub fn rank_bounds(report: &BoundReport) -> Ranking {
    rank_values(&report.values)
}

pub fn rank_values(values: &[f64; 7]) -> Ranking {
    let mut order: Vec<Bound> = Bound::ALL.to_vec();
    order.sort_by(|a, b| values[b.index()].total_cmp(&values[a.index()]).then(a.cmp(b)));
    let mut groups: Vec<Vec<Bound>> = Vec::new();
    let mut last = f64::NAN;
    for b in order {
        let v = values[b.index()];
        match groups.last_mut() {
            Some(g) if (last - v).abs() <= RANK_RESOLUTION => g.push(b),
            _ => groups.push(vec![b]),
        }
        last = v;
    }
    for g in &mut groups {
        g.sort();
    }
    Ranking { groups }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Ginibre states, simplex priors.
    General,
    /// States diagonal in a shared random basis; exact `Q_E` is available.
    Commuting,
    /// Ginibre states with `p_i = 1/m`.
    Equiprobable,
    /// The structured family in dimension `m + 1` (`dim` is ignored).
    Structured,
}

impl SweepKind {
    pub const ALL: [SweepKind; 4] = [
        SweepKind::General,
        SweepKind::Commuting,
        SweepKind::Equiprobable,
        SweepKind::Structured,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::General => "general",
            SweepKind::Commuting => "commuting",
            SweepKind::Equiprobable => "equiprobable",
            SweepKind::Structured => "structured",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub seed: u64,
    pub trials: usize,
    pub m: usize,
    pub dim: usize,
    pub kind: SweepKind,
    pub tolerances: Tolerances,
    /// Maximum number of per-trial records kept in the summary.
    pub record_cap: usize,
}

impl SweepConfig {
    pub fn new(seed: u64, trials: usize, m: usize, dim: usize, kind: SweepKind) -> Self {
        Self {
            seed,
            trials,
            m,
            dim,
            kind,
            tolerances: Tolerances::default(),
            record_cap: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.m < 2 {
            return Err(Error::InvalidConfig(format!("m must be at least 2, got {}", self.m)));
        }
        if self.dim < 2 {
            return Err(Error::InvalidConfig(format!("dim must be at least 2, got {}", self.dim)));
        }
        self.tolerances.validate()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "m": self.m,
            "dim": self.dim,
            "kind": self.kind.as_str(),
            "tolerances": self.tolerances.to_value(),
            "record_cap": self.record_cap,
        })
    }

    /// SHA-256 of the rendered configuration.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(json::render(&self.to_value()).as_bytes()))
    }
}

/// Inequalities evaluated on every applicable trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    /// `L4 >= L2`.
    L4AtLeastL2,
    /// `m = 2`: `L4 = L2 = H`.
    TwoStateCollapse,
    /// `m = 2`: `H >= L3`.
    HelstromAtLeastL3,
    /// Equal priors: `L4 >= L3`.
    EquiprobableL4AtLeastL3,
    /// `L2 >= L3 / (m - 1)`.
    L2AtLeastScaledL3,
    /// `L4 >= L3` when `max_i a_i >= sum_i a_i / 2`, `a_i = sum_{j != i} p_i p_j F_ij^2`.
    DominantPairL4AtLeastL3,
    /// `2(1 - F) <= Tr|rho - sigma| <= 2 sqrt(1 - F^2)` per pair.
    FidelityTraceDistance,
    /// `p1 + p2 - 2 sqrt(p1 p2) F <= Tr|p1 rho1 - p2 rho2| <= p1 + p2 - 2 p1 p2 F^2` per pair.
    WeightedPairSandwich,
    /// `min_k (p_k + sum_{j != k} Tr(p_j rho_j - p_k rho_k)_+) <= 1`.
    SuccessCapAtMostOne,
    /// Every bound `<= Q_E` where an exact solver applies.
    BoundBelowExact,
    /// The two-state Helstrom measurement passes the optimality certificate.
    HelstromCertifies,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::L4AtLeastL2,
        Check::TwoStateCollapse,
        Check::HelstromAtLeastL3,
        Check::EquiprobableL4AtLeastL3,
        Check::L2AtLeastScaledL3,
        Check::DominantPairL4AtLeastL3,
        Check::FidelityTraceDistance,
        Check::WeightedPairSandwich,
        Check::SuccessCapAtMostOne,
        Check::BoundBelowExact,
        Check::HelstromCertifies,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::L4AtLeastL2 => "l4_ge_l2",
            Check::TwoStateCollapse => "two_state_collapse",
            Check::HelstromAtLeastL3 => "helstrom_ge_l3",
            Check::EquiprobableL4AtLeastL3 => "equiprobable_l4_ge_l3",
            Check::L2AtLeastScaledL3 => "l2_ge_l3_over_m_minus_1",
            Check::DominantPairL4AtLeastL3 => "dominant_pair_l4_ge_l3",
            Check::FidelityTraceDistance => "fidelity_trace_distance",
            Check::WeightedPairSandwich => "weighted_pair_sandwich",
            Check::SuccessCapAtMostOne => "success_cap_le_1",
            Check::BoundBelowExact => "bound_le_exact",
            Check::HelstromCertifies => "helstrom_certifies",
        }
    }
}

/// Aggregate for one check. `worst_margin` is the smallest observed
/// `lhs - rhs` (negative means the inequality was crossed); a violation is a
/// margin below `-CONSISTENCY_SLACK`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckStats {
    pub evaluated: usize,
    pub violations: usize,
    pub worst_margin: f64,
}

impl Default for CheckStats {
    fn default() -> Self {
        Self {
            evaluated: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
        }
    }
}

impl CheckStats {
    fn record(&mut self, margin: f64) {
        self.record_with(margin, margin < -CONSISTENCY_SLACK || margin.is_nan());
    }

    fn record_with(&mut self, margin: f64, violated: bool) {
        self.evaluated += 1;
        if violated {
            self.violations += 1;
        }
        self.worst_margin = self.worst_margin.min(margin);
    }

    fn merge(mut self, other: Self) -> Self {
        self.evaluated += other.evaluated;
        self.violations += other.violations;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub values: [f64; 7],
    pub helstrom: Option<f64>,
    pub exact_qe: Option<f64>,
    pub ranking: Ranking,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub config: SweepConfig,
    pub config_hash: String,
    /// Trials where the bound was the unique maximum.
    pub wins: [usize; 7],
    /// Trials where the bound shared the maximum with another bound.
    pub shared_wins: [usize; 7],
    /// Trials whose maximum was shared.
    pub tied_trials: usize,
    pub checks: BTreeMap<Check, CheckStats>,
    pub records: Vec<TrialRecord>,
}

impl SweepSummary {
    pub fn total_violations(&self) -> usize {
        self.checks.values().map(|c| c.violations).sum()
    }

    pub fn check(&self, c: Check) -> CheckStats {
        self.checks.get(&c).copied().unwrap_or_default()
    }

    /// Bounds that were the strict maximum on at least one trial.
    pub fn distinct_winners(&self) -> Vec<Bound> {
        Bound::ALL.into_iter().filter(|b| self.wins[b.index()] > 0).collect()
    }

    pub fn to_value(&self) -> Value {
        let per_bound = |counts: &[usize; 7]| {
            let mut map = Map::new();
            for b in Bound::ALL {
                map.insert(b.name().into(), json!(counts[b.index()]));
            }
            Value::Object(map)
        };
        let mut checks = Map::new();
        for (c, s) in &self.checks {
            checks.insert(
                c.name().into(),
                json!({
                    "evaluated": s.evaluated,
                    "violations": s.violations,
                    "worst_margin": json::number(s.worst_margin),
                }),
            );
        }
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|r| {
                json!({
                    "index": r.index,
                    "seed": r.seed,
                    "values": json::numbers(&r.values),
                    "helstrom": r.helstrom.map(json::number),
                    "exact_qe": r.exact_qe.map(json::number),
                    "ranking": r.ranking.to_string(),
                })
            })
            .collect();
        json!({
            "config": self.config.to_value(),
            "config_hash": self.config_hash,
            "wins": per_bound(&self.wins),
            "shared_wins": per_bound(&self.shared_wins),
            "tied_trials": self.tied_trials,
            "total_violations": self.total_violations(),
            "checks": Value::Object(checks),
            "records": records,
        })
    }
}

fn rec(checks: &mut BTreeMap<Check, CheckStats>, c: Check, margin: f64) {
    checks.entry(c).or_default().record(margin);
}

struct TrialOutcome {
    record: TrialRecord,
    checks: BTreeMap<Check, CheckStats>,
}

fn draw(cfg: &SweepConfig, s: &mut Sampler) -> Result<(Ensemble, Option<f64>)> {
    let tol = &cfg.tolerances;
    match cfg.kind {
        SweepKind::General => Ok((sample_ensemble(s, cfg.m, cfg.dim)?, None)),
        SweepKind::Equiprobable => {
            let e = sample_ensemble(s, cfg.m, cfg.dim)?;
            Ok((e.with_priors(vec![1.0 / cfg.m as f64; cfg.m], tol)?, None))
        }
        SweepKind::Commuting => {
            let e = sample_commuting_ensemble(s, cfg.m, cfg.dim)?;
            let qe = solve_commuting(&e, tol)?.qe;
            Ok((e, Some(qe)))
        }
        SweepKind::Structured => {
            let st = sample_structured(s, cfg.m)?;
            let qe = solve_structured(&st, tol)?.qe;
            Ok((structured_to_ensemble(&st), Some(qe)))
        }
    }
}

fn run_trial(cfg: &SweepConfig, index: usize) -> Result<TrialOutcome> {
    let tol = &cfg.tolerances;
    let seed = crate::random::trial_seed(cfg.seed, index as u64);
    let mut sampler = Sampler::new(seed);
    let (e, mut exact_qe) = draw(cfg, &mut sampler)?;
    let report = all_bounds(&e, tol)?;
    let m = e.m();
    let p = e.priors();
    let f = pairwise_fidelities(&e, tol)?;
    let mut checks: BTreeMap<Check, CheckStats> = BTreeMap::new();

    let (l2, l3, l4) = (report.get(Bound::L2), report.get(Bound::L3), report.get(Bound::L4));
    rec(&mut checks, Check::L4AtLeastL2, l4 - l2);
    rec(&mut checks, Check::L2AtLeastScaledL3, l2 - l3 / (m - 1) as f64);
    let a: Vec<f64> = (0..m)
        .map(|i| (0..m).filter(|&j| j != i).map(|j| p[i] * p[j] * f[i][j] * f[i][j]).sum())
        .collect();
    let a_max = a.iter().copied().fold(0.0, f64::max);
    if a_max >= 0.5 * a.iter().sum::<f64>() {
        rec(&mut checks, Check::DominantPairL4AtLeastL3, l4 - l3);
    }
    if p.iter().all(|&x| x == p[0]) {
        rec(&mut checks, Check::EquiprobableL4AtLeastL3, l4 - l3);
    }
    let cap = report.l4.success_caps[report.l4.k_min];
    rec(&mut checks, Check::SuccessCapAtMostOne, 1.0 - cap);

    for i in 0..m {
        for j in (i + 1)..m {
            let fij = f[i][j];
            let dist = trace_norm(&(e.state(i) - e.state(j)), tol)?;
            let upper = 2.0 * (1.0 - fij * fij).max(0.0).sqrt();
            rec(&mut checks, Check::FidelityTraceDistance, (dist - 2.0 * (1.0 - fij)).min(upper - dist));
            let wdist = trace_norm(&(&e.weighted(i) - &e.weighted(j)), tol)?;
            let lower = p[i] + p[j] - 2.0 * (p[i] * p[j]).sqrt() * fij;
            let upper = p[i] + p[j] - 2.0 * p[i] * p[j] * fij * fij;
            rec(&mut checks, Check::WeightedPairSandwich, (wdist - lower).min(upper - wdist));
        }
    }

    if m == 2 {
        let h = helstrom(&e, tol)?;
        rec(&mut checks, Check::TwoStateCollapse, -(l4 - h).abs().max((l2 - h).abs()));
        rec(&mut checks, Check::HelstromAtLeastL3, h - l3);
        let two = solve_two_state(&e, tol);
        // Margin relative to the certificate's own pass thresholds.
        let (defect, min_margin) = match &two {
            Ok(r) => (r.certificate.hermiticity_defect, r.certificate.min_margin),
            Err(Error::CertificateFailed {
                hermiticity_defect,
                min_margin,
            }) => (*hermiticity_defect, *min_margin),
            Err(other) => return Err(other.clone()),
        };
        checks
            .entry(Check::HelstromCertifies)
            .or_default()
            .record_with((min_margin + tol.psd).min(tol.recon - defect), two.is_err());
        if let Ok(r) = two {
            exact_qe.get_or_insert(r.qe);
        }
    }
    if let Some(qe) = exact_qe {
        let best = report.best().max(report.helstrom.unwrap_or(f64::NEG_INFINITY));
        rec(&mut checks, Check::BoundBelowExact, qe - best);
    }

    let ranking = rank_bounds(&report);
    Ok(TrialOutcome {
        record: TrialRecord {
            index,
            seed,
            values: report.values,
            helstrom: report.helstrom,
            exact_qe,
            ranking,
        },
        checks,
    })
}

/// Runs `cfg.trials` independent trials in parallel and aggregates them.
///
/// Trial `i` draws from the generator seeded with `seed ^ i`; aggregation only
/// sums counts and takes minima, so the summary does not depend on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary> {
    cfg.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<_>>()?;

    let mut wins = [0; 7];
    let mut shared_wins = [0; 7];
    let mut tied_trials = 0;
    let mut checks: BTreeMap<Check, CheckStats> = BTreeMap::new();
    let mut records = Vec::new();
    for o in outcomes {
        let top = o.record.ranking.winners();
        if top.len() == 1 {
            wins[top[0].index()] += 1;
        } else {
            tied_trials += 1;
            for b in top {
                shared_wins[b.index()] += 1;
            }
        }
        for (c, s) in o.checks {
            let entry = checks.entry(c).or_default();
            *entry = entry.merge(s);
        }
        if records.len() < cfg.record_cap {
            records.push(o.record);
        }
    }
    Ok(SweepSummary {
        config_hash: cfg.hash(),
        config: cfg.clone(),
        wins,
        shared_wins,
        tied_trials,
        checks,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_groups_ties() {
        let r = rank_values(&[0.3, 0.3, 0.1, 0.05, 0.2, 0.0, 0.15]);
        assert_eq!(r.to_string(), "L0=L1>L4>L6>L2>L3>L5");
        assert_eq!(Ranking::parse("L1=L0>L4>L6>L2>L3>L5").unwrap(), r);
        let flat = rank_values(&[0.25; 7]);
        assert_eq!(flat.groups.len(), 1);
        assert_eq!(flat.groups[0].len(), 7);
    }

    #[test]
    fn ranking_resolution() {
        let r = rank_values(&[0.2, 0.2 + 5e-10, 0.1, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.groups[0], vec![Bound::L0, Bound::L1]);
        let r = rank_values(&[0.2, 0.2 + 5e-9, 0.1, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.groups[0], vec![Bound::L1]);
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::new(1, 0, 3, 2, SweepKind::General).validate().is_err());
        assert!(SweepConfig::new(1, 5, 1, 2, SweepKind::General).validate().is_err());
        assert!(SweepConfig::new(1, 5, 3, 1, SweepKind::General).validate().is_err());
    }

    #[test]
    fn single_trial_is_deterministic() {
        let cfg = SweepConfig::new(42, 1, 3, 2, SweepKind::General);
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(json::render(&a.to_value()), json::render(&b.to_value()));
    }

    #[test]
    fn win_accounting_adds_up() {
        let mut cfg = SweepConfig::new(9, 40, 3, 3, SweepKind::Commuting);
        cfg.record_cap = 5;
        let s = run_sweep(&cfg).unwrap();
        assert_eq!(s.wins.iter().sum::<usize>() + s.tied_trials, 40);
        assert_eq!(s.records.len(), 5);
        assert_eq!(s.total_violations(), 0);
        assert_eq!(s.check(Check::BoundBelowExact).evaluated, 40);
    }

    #[test]
    fn two_state_sweep_runs_pair_checks() {
        let s = run_sweep(&SweepConfig::new(3, 30, 2, 3, SweepKind::General)).unwrap();
        assert_eq!(s.check(Check::TwoStateCollapse).evaluated, 30);
        assert_eq!(s.check(Check::HelstromCertifies).evaluated, 30);
        assert_eq!(s.total_violations(), 0);
    }
}
