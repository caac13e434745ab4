//! The `audit` subcommand: deterministic and randomized checks of the
//! combinatorial lemmas, reported as one JSON document.

use mstratio::habitat::gap_bounds;
use mstratio::{
    audit_cost_gaps, check_backyard_bound, cost_table, generate_rhombus, habitat_summary, mst,
    Basis, Metric, PointCloud, Topology,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::output::{to_json, write_out, CliError};
use crate::AuditArgs;

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Check {
        Check {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(detail());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_subset(rng: &mut ChaCha8Rng, len: usize) -> Vec<usize> {
    let density = rng.gen_range(0.1..0.9);
    let mut b: Vec<usize> = (0..len).filter(|_| rng.gen_bool(density)).collect();
    if b.is_empty() {
        b.push(rng.gen_range(0..len));
    }
    b
}

fn tree_length(cloud: &PointCloud, metric: Metric) -> Result<f64, CliError> {
    if cloud.len() < 2 {
        return Ok(0.0);
    }
    Ok(mst(cloud, metric)?.total_length())
}

fn backyard_audit(args: &AuditArgs, rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let mut check = Check::new("backyard-bound-and-monotone-chain");
    let n = args.torus;
    let k_max = (n.saturating_sub(1) / 4).min(3);
    if k_max == 0 {
        return Err(CliError::Config(format!("--torus {n} leaves no admissible level")));
    }
    let torus = generate_rhombus(&Basis::hexagonal(), n, Topology::torus(n)?)?;
    for case in 0..args.samples {
        let b = random_subset(rng, torus.len());
        let s = habitat_summary(&torus, &b, k_max)?;
        let ok = (1..=k_max).all(|k| check_backyard_bound(&s, k))
            && s.levels.iter().all(|l| l.is_monotone());
        check.record(ok, || format!("case {case}: |B| = {}", b.len()));
    }
    Ok(check)
}

fn square_audit(args: &AuditArgs, rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let mut check = Check::new("square-bound");
    for case in 0..args.samples.max(1) {
        let n = rng.gen_range(2..=200usize);
        let side = n as f64;
        let points: Vec<[f64; 2]> =
            (0..n).map(|_| [rng.gen_range(0.0..=side), rng.gen_range(0.0..=side)]).collect();
        let len = tree_length(&PointCloud::from_points(points)?, Metric::EuclideanPlane)?;
        let bound = 2.0 * side * (side - 1.0).sqrt();
        check.record(len <= bound, || format!("case {case}: n = {n}, length {len} > {bound}"));
    }
    Ok(check)
}

fn torus_gap_audit(args: &AuditArgs, rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let mut check = Check::new("plane-torus-gap");
    for case in 0..args.samples {
        let n = rng.gen_range(4..=12u32);
        let plane = generate_rhombus(&Basis::hexagonal(), n, Topology::Plane)?;
        let torus = generate_rhombus(&Basis::hexagonal(), n, Topology::torus(n)?)?;
        let b = random_subset(rng, plane.len());
        let lp = tree_length(&plane.subset(&b), Metric::EuclideanPlane)?;
        let lt = tree_length(&torus.subset(&b), Metric::EuclideanTorus)?;
        let nf = f64::from(n);
        let slack = 32.0 * 2f64.sqrt() * nf * nf.sqrt();
        let ok = lt <= lp + 1e-9 && lp <= lt + slack;
        check.record(ok, || format!("case {case}: n = {n}, torus {lt}, plane {lp}"));
    }
    Ok(check)
}

pub fn run(args: &AuditArgs) -> Result<(), CliError> {
    if args.k_max < 2 {
        return Err(CliError::Config("--k-max must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    let table = cost_table(2)?;
    let gaps = audit_cost_gaps(args.k_max)?;
    let mut gap_check = Check::new("cost-gaps");
    for row in gaps.rows.iter().filter(|r| r.k >= 2) {
        gap_check.record(row.holds.iter().all(|&h| h), || format!("k = {}: gaps {:?}", row.k, row.gaps));
    }
    let informational: Vec<_> = gaps
        .violations()
        .into_iter()
        .filter(|&(k, _)| k < 2)
        .map(|(k, g)| json!({ "k": k, "gap": g, "value": gaps.rows[k as usize - 1].gaps[g] }))
        .collect();

    let checks = vec![
        gap_check,
        backyard_audit(args, &mut rng)?,
        square_audit(args, &mut rng)?,
        torus_gap_audit(args, &mut rng)?,
    ];
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.to_string()).collect();
    let report = json!({
        "seed": args.seed,
        "passed": failed.is_empty(),
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "cases": c.cases,
            "passed": c.passed(),
            "failures": c.failures,
        })).collect::<Vec<_>>(),
        "cost_table": table.rows.iter().map(|r| json!({
            "hex_len": r.hex_len,
            "sq_len": r.sq_len,
            "cost": r.cost,
            "truncated": r.truncated_cost(),
        })).collect::<Vec<_>>(),
        "gap_bounds": gap_bounds(),
        "k1_gap_exceptions": informational,
    });
    write_out(&args.sink.out, &to_json(&report))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::AuditFailed(failed))
    }
}
