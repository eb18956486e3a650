use std::fmt::Write as _;

use serde_json::{json, Value};

use matdens::applications::{addable_edges, edge_toughness, edge_toughness_direct, removal_number, removal_oracle};
use matdens::kl::{gibbs_bound, length_certificate, mkl_solve, vmax_core_check, MklOptions};
use matdens::rational::{self, Rational};
use matdens::sfm::density_report;
use matdens::spectrum::{spectrum_consistency_check, truncation_spectrum, Breakpoint, Cell, SpectrumTable};
use matdens::universal::{
    certified_round, density_denominator_bound, dual_density_check, oracle_min_2norm, universal_density,
    verify_lexicographic,
};
use matdens::{Error, Result, SubsetMask};

use crate::input::{load, Instance};
use crate::report::{CsvOut, Report};
use crate::{Cli, Command};

const VERIFY_SPECTRUM_MAX: usize = 30;
const MKL_TOL: f64 = 1e-7;

pub fn execute(cli: &Cli) -> Result<Report> {
    let limit = cli.oracle_limit;
    match &cli.command {
        Command::Analyze(src) => analyze(&load(src)?),
        Command::Spectrum { source, t, full } => spectrum(&load(source)?, *t, *full),
        Command::Mkl { source, tol, max_iter, certify } => {
            mkl(&load(source)?, &MklOptions { tol: *tol, max_iter: *max_iter }, *certify)
        }
        Command::Nk { source, k } => nk(&load(source)?, *k),
        Command::Addable { source, k } => addable(&load(source)?, *k),
        Command::Toughness { source, c } => toughness(&load(source)?, *c, limit),
        Command::Verify(src) => verify(&load(src)?, limit),
    }
}

fn q(x: &Rational) -> String {
    rational::format(x)
}

fn names(inst: &Instance, s: &SubsetMask) -> Vec<String> {
    inst.matroid.ground().names(s)
}

fn vertex_pair(inst: &Instance, (u, v): (usize, usize)) -> String {
    match &inst.graph {
        Some(g) => format!("{}-{}", g.vertex_label(u), g.vertex_label(v)),
        None => format!("{u}-{v}"),
    }
}

/// Elements grouped by a per-element key: by edge style for the demo, by key otherwise.
fn grouped(inst: &Instance, keys: &[String]) -> Vec<(String, String, Vec<usize>)> {
    let mut out: Vec<(String, String, Vec<usize>)> = Vec::new();
    for (e, key) in keys.iter().enumerate() {
        let group = inst.styles.as_ref().map_or(String::new(), |s| s[e].name().to_string());
        match out.iter_mut().find(|(g, k, _)| *g == group && k == key) {
            Some((_, _, es)) => es.push(e),
            None => out.push((group, key.clone(), vec![e])),
        }
    }
    out
}

fn write_groups(t: &mut String, inst: &Instance, keys: &[String], indent: &str) {
    for (group, key, es) in grouped(inst, keys) {
        if inst.styles.is_some() {
            let _ = writeln!(t, "{indent}{group:<8} {key:<14} {} edges", es.len());
        } else {
            let labels: Vec<&str> = es.iter().map(|&e| inst.matroid.label(e)).collect();
            let _ = writeln!(t, "{indent}{key:<14} {}", labels.join(" "));
        }
    }
}

fn header(inst: &Instance) -> String {
    let m = &inst.matroid;
    format!(
        "matroid      {}, {} elements, rank {}\nweights      {}\n",
        m.kind().name(),
        m.len(),
        m.full_rank(),
        if inst.weighted { "custom" } else { "unit" }
    )
}

fn analyze(inst: &Instance) -> Result<Report> {
    let m = &inst.matroid;
    let (eta, pp) = universal_density(m, &inst.sigma)?;
    let dr = density_report(m, &inst.sigma)?;
    let mut t = header(inst);
    let _ = writeln!(t, "strength     {}", q(&dr.strength));
    let _ = writeln!(t, "arboricity   {} (fractional), covering number {}", q(&dr.arboricity), dr.cover_number);
    let _ = writeln!(t, "packing      {} disjoint bases", dr.tau);
    let _ = writeln!(t, "\nprincipal partition ({} levels)", pp.len());
    for (i, (lvl, blk)) in pp.levels.iter().zip(&pp.blocks).enumerate() {
        let _ = writeln!(t, "  A{:<3} ratio {:<10} {} elements", i + 1, q(lvl), blk.count());
    }
    let keys: Vec<String> = eta.values().iter().map(q).collect();
    let _ = writeln!(t, "\nuniversal density");
    write_groups(&mut t, inst, &keys, "  ");

    let mut csv = CsvOut::new("matdens-density v1", &["element", "level", "value_num", "value_den"]);
    for e in 0..m.len() {
        let v = &eta[e];
        csv.row([
            m.label(e).to_string(),
            (pp.level_of(e) + 1).to_string(),
            v.numer().to_string(),
            v.denom().to_string(),
        ]);
    }
    let json = json!({
        "elements": m.len(),
        "rank": m.full_rank(),
        "weighted": inst.weighted,
        "strength": q(&dr.strength),
        "strength_set": names(inst, &dr.strength_set),
        "arboricity": q(&dr.arboricity),
        "core": names(inst, &dr.core),
        "packing_number": dr.tau.to_string(),
        "covering_number": dr.cover_number.to_string(),
        "partition": pp.levels.iter().zip(&pp.blocks).map(|(l, b)| json!({"ratio": q(l), "elements": names(inst, b)})).collect::<Vec<_>>(),
        "density": (0..m.len()).map(|e| json!({"element": m.label(e), "value": q(&eta[e])})).collect::<Vec<_>>(),
    });
    Ok(Report { table: t, csv: csv.finish(), json, mismatch: false })
}

fn breakpoint_json(b: &Breakpoint) -> Value {
    json!({"level": q(&b.level), "size": b.size, "outside_rank": b.outside_rank, "b": b.b, "c": b.c})
}

fn write_breakpoints(t: &mut String, bs: &[Breakpoint]) {
    for b in bs {
        let s = q(&b.level);
        let _ = writeln!(t, "  s {s:<10} |E_i| {:<5} r(E-E_i) {:<5} b {:<5} c {}", b.size, b.outside_rank, b.b, b.c);
    }
}

fn cell_keys(cells: &[Cell]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

fn row_json(inst: &Instance, table: &SpectrumTable, t: usize) -> Value {
    let d = table.density(t);
    json!({
        "t": t,
        "values": (0..table.n).map(|e| json!({"element": inst.matroid.label(e), "value": q(&d[e])})).collect::<Vec<_>>(),
    })
}

fn spectrum(inst: &Instance, only: Option<usize>, full: bool) -> Result<Report> {
    inst.require_unweighted()?;
    let m = &inst.matroid;
    let table = truncation_spectrum(m)?;
    if let Some(t) = only {
        if t == 0 || t > table.n {
            return Err(Error::input(format!("t = {t} outside [1, {}]", table.n)));
        }
    }
    let rows: Vec<usize> = match only {
        Some(t) => vec![t],
        None => (1..=table.n).collect(),
    };

    let mut t = header(inst);
    let _ = writeln!(t, "balancity    {}", table.balancity);
    let _ = writeln!(t, "\nbreakpoints");
    write_breakpoints(&mut t, &table.breakpoints);
    if !table.dual_breakpoints.is_empty() {
        let _ = writeln!(t, "dual breakpoints");
        write_breakpoints(&mut t, &table.dual_breakpoints);
    }
    let ranges = table.ranges();
    if full || only.is_some() {
        for &r in &rows {
            let d = table.density(r);
            let cells = table.cells(r);
            let _ = writeln!(t, "\nt = {r}");
            for e in 0..table.n {
                let _ = writeln!(t, "  {:<10} {:<10} {}", m.label(e), q(&d[e]), cells[e]);
            }
        }
    } else {
        let _ = writeln!(t, "\nranges");
        for r in &ranges {
            let _ = writeln!(t, "  t = {}..{}", r.t_lo, r.t_hi);
            write_groups(&mut t, inst, &cell_keys(&r.cells), "    ");
        }
    }

    let mut csv = CsvOut::new("matdens-spectrum v1", &["t", "element", "value_num", "value_den"]);
    for &r in &rows {
        let d = table.density(r);
        for e in 0..table.n {
            csv.row([r.to_string(), m.label(e).to_string(), d[e].numer().to_string(), d[e].denom().to_string()]);
        }
    }
    let mut json = json!({
        "elements": table.n,
        "rank": table.rank,
        "balancity": table.balancity,
        "breakpoints": table.breakpoints.iter().map(breakpoint_json).collect::<Vec<_>>(),
        "dual_breakpoints": table.dual_breakpoints.iter().map(breakpoint_json).collect::<Vec<_>>(),
        "ranges": ranges.iter().map(|r| json!({
            "t_lo": r.t_lo,
            "t_hi": r.t_hi,
            "cells": (0..table.n).map(|e| json!({"element": m.label(e), "formula": r.cells[e].to_string()})).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    if full || only.is_some() {
        json["rows"] = rows.iter().map(|&r| row_json(inst, &table, r)).collect::<Vec<_>>().into();
    }
    Ok(Report { table: t, csv: csv.finish(), json, mismatch: false })
}

fn f(x: f64) -> String {
    format!("{x:.12}")
}

fn mkl(inst: &Instance, opts: &MklOptions, certify: bool) -> Result<Report> {
    let m = &inst.matroid;
    let sol = mkl_solve(m, &inst.sigma, opts)?;
    let (eta, _) = universal_density(m, &inst.sigma)?;
    let exact = eta.to_f64();
    let deviation = sol.density.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let rounded = certified_round(&sol.density, density_denominator_bound(&inst.sigma));
    let bound = gibbs_bound(m, &inst.sigma);

    let mut t = header(inst);
    let _ = writeln!(t, "objective    {}", f(sol.value));
    let _ = writeln!(t, "gibbs bound  {}", f(bound));
    let _ = writeln!(t, "iterations   {}", sol.iterations);
    let _ = writeln!(t, "gap          {:.3e}", sol.duality_gap);
    let _ = writeln!(t, "converged    {}", if sol.converged { "yes" } else { "no" });
    let _ = writeln!(t, "support      {} bases", sol.pmf.bases.len());
    let _ = writeln!(t, "max |η - η*| {deviation:.3e}");
    let mut cert_json = Value::Null;
    if certify {
        let cert = length_certificate(m, &inst.sigma, &sol.density, 1e-9)?;
        let core = vmax_core_check(m, &inst.sigma, &sol.density, 1e-9)?;
        let _ = writeln!(
            t,
            "length       max {} vs σ(E) {} ({})",
            f(cert.max_length),
            f(cert.sigma_total),
            if cert.tight { "tight" } else { "NOT tight" }
        );
        let _ = writeln!(
            t,
            "core         v_max {} on {} elements, arboricity {} ({})",
            f(core.vmax),
            core.vmax_set.count(),
            f(core.arboricity),
            if core.holds() { "match" } else { "MISMATCH" }
        );
        cert_json = json!({
            "max_length": cert.max_length,
            "sigma_total": cert.sigma_total,
            "tight": cert.tight,
            "vmax": core.vmax,
            "vmax_set": names(inst, &core.vmax_set),
            "core": names(inst, &core.core),
            "core_matches": core.holds(),
        });
    }
    let _ = writeln!(t, "\ndensity");
    let keys: Vec<String> = sol.density.iter().map(|&x| f(x)).collect();
    write_groups(&mut t, inst, &keys, "  ");

    let mut csv = CsvOut::new("matdens-mkl v1", &["element", "value", "exact"]);
    for e in 0..m.len() {
        csv.row([m.label(e).to_string(), f(sol.density[e]), q(&eta[e])]);
    }
    let json = json!({
        "objective": sol.value,
        "gibbs_bound": bound,
        "iterations": sol.iterations,
        "duality_gap": sol.duality_gap,
        "converged": sol.converged,
        "max_deviation": deviation,
        "density": (0..m.len()).map(|e| json!({
            "element": m.label(e),
            "value": sol.density[e],
            "rounded": rounded.as_ref().map(|r| q(&r[e])),
        })).collect::<Vec<_>>(),
        "certificate": cert_json,
    });
    Ok(Report { table: t, csv: csv.finish(), json, mismatch: false })
}

fn nk(inst: &Instance, k: usize) -> Result<Report> {
    inst.require_unweighted()?;
    let ans = removal_number(&inst.matroid, k)?;
    let witness = names(inst, &ans.witness);
    let s_set = names(inst, &ans.s_set);
    let mut t = header(inst);
    let _ = writeln!(t, "k            {k}");
    let _ = writeln!(t, "N(M, k)      {}", ans.n_value);
    let _ = writeln!(t, "i(k)         {}", ans.i_of_k.map_or("none".to_string(), |i| (i + 1).to_string()));
    let _ = writeln!(t, "|S|          {}", ans.s_set.count());
    let _ = writeln!(t, "covering     {}", if ans.covering_verified { "verified" } else { "FAILED" });
    let _ = writeln!(t, "rank kept    {}", if ans.rank_preserved { "yes" } else { "no" });
    let _ = writeln!(t, "witness      {}", witness.join(" "));

    let mut csv = CsvOut::new("matdens-nk v1", &["element", "in_witness", "in_s"]);
    for e in 0..inst.matroid.len() {
        csv.row([
            inst.matroid.label(e).to_string(),
            (ans.witness.contains(e) as u8).to_string(),
            (ans.s_set.contains(e) as u8).to_string(),
        ]);
    }
    let json = json!({
        "k": k,
        "n_value": ans.n_value,
        "i_of_k": ans.i_of_k.map(|i| i + 1),
        "s_set": s_set,
        "witness": witness,
        "covering_verified": ans.covering_verified,
        "rank_preserved": ans.rank_preserved,
    });
    Ok(Report { table: t, csv: csv.finish(), json, mismatch: false })
}

fn addable(inst: &Instance, k: usize) -> Result<Report> {
    let g = inst.require_graph()?;
    let rep = addable_edges(g, k)?;
    let mut t = header(inst);
    let _ = writeln!(t, "k            {k}");
    let _ = writeln!(t, "arboricity   {} (fractional)", q(&rep.arboricity));
    let _ = writeln!(t, "case         {}", rep.case.name());
    let _ = writeln!(t, "addable      {} pairs", rep.addable.len());
    for &p in &rep.addable {
        let _ = writeln!(t, "  {}", vertex_pair(inst, p));
    }
    let _ = writeln!(t, "blocked      {} pairs", rep.blocked.len());
    for b in &rep.blocked {
        let w: Vec<&str> = b.witness.iter().map(|&v| g.vertex_label(v)).collect();
        let _ = writeln!(t, "  {}  witness {{{}}}", vertex_pair(inst, b.pair), w.join(" "));
    }

    let mut csv = CsvOut::new("matdens-addable v1", &["u", "v", "addable"]);
    let mut all: Vec<((usize, usize), bool)> =
        rep.addable.iter().map(|&p| (p, true)).chain(rep.blocked.iter().map(|b| (b.pair, false))).collect();
    all.sort();
    for ((u, v), ok) in all {
        csv.row([g.vertex_label(u), g.vertex_label(v), if ok { "1" } else { "0" }]);
    }
    let json = json!({
        "k": k,
        "arboricity": q(&rep.arboricity),
        "case": rep.case.name(),
        "addable": rep.addable.iter().map(|&(u, v)| json!([g.vertex_label(u), g.vertex_label(v)])).collect::<Vec<_>>(),
        "blocked": rep.blocked.iter().map(|b| json!({
            "pair": [g.vertex_label(b.pair.0), g.vertex_label(b.pair.1)],
            "witness": b.witness.iter().map(|&v| g.vertex_label(v)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    Ok(Report { table: t, csv: csv.finish(), json, mismatch: false })
}

fn toughness(inst: &Instance, c: usize, limit: usize) -> Result<Report> {
    let g = inst.require_graph()?;
    let tau = edge_toughness(g, c)?;
    let direct = match edge_toughness_direct(g, c, limit) {
        Ok(v) => Some(v),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    let mismatch = direct.as_ref().is_some_and(|d| *d != tau);
    let mut t = header(inst);
    let _ = writeln!(t, "c            {c}");
    let _ = writeln!(t, "toughness    {}", q(&tau));
    let _ = writeln!(
        t,
        "direct       {}",
        match &direct {
            Some(d) if *d == tau => "agrees".to_string(),
            Some(d) => format!("DIFFERS ({})", q(d)),
            None => "skipped (too many edge subsets)".to_string(),
        }
    );
    let mut csv = CsvOut::new("matdens-toughness v1", &["c", "value_num", "value_den"]);
    csv.row([c.to_string(), tau.numer().to_string(), tau.denom().to_string()]);
    let json = json!({"c": c, "toughness": q(&tau), "direct": direct.as_ref().map(q)});
    Ok(Report { table: t, csv: csv.finish(), json, mismatch })
}

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

impl Outcome {
    fn status(&self) -> &'static str {
        match self {
            Outcome::Pass(_) => "PASS",
            Outcome::Fail(_) => "FAIL",
            Outcome::Skip(_) => "SKIP",
        }
    }

    fn detail(&self) -> &str {
        match self {
            Outcome::Pass(d) | Outcome::Fail(d) | Outcome::Skip(d) => d,
        }
    }

    fn judge(ok: bool, detail: String) -> Self {
        if ok {
            Outcome::Pass(detail)
        } else {
            Outcome::Fail(detail)
        }
    }
}

fn guard(r: Result<Outcome>) -> Outcome {
    match r {
        Ok(o) => o,
        Err(e @ (Error::Capacity { .. } | Error::Domain(_) | Error::Input(_))) => Outcome::Skip(e.to_string()),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn verify(inst: &Instance, limit: usize) -> Result<Report> {
    let m = &inst.matroid;
    let sigma = &inst.sigma;
    let (eta, _) = universal_density(m, sigma)?;
    let exact = eta.to_f64();
    let mut checks: Vec<(&str, Outcome)> = Vec::new();

    checks.push((
        "lexicographic",
        guard(verify_lexicographic(m, sigma, eta.values()).map(|r| {
            Outcome::judge(r.holds, format!("{} level sets, in polytope: {}", r.levels.len(), r.in_polytope))
        })),
    ));
    checks.push((
        "min-norm oracle",
        guard(oracle_min_2norm(m, sigma, limit).map(|y| {
            let dev = y.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let rounded = certified_round(&y, density_denominator_bound(sigma));
            Outcome::judge(dev <= 1e-9 && rounded.as_deref() == Some(eta.values()), format!("max deviation {dev:.2e}"))
        })),
    ));
    checks.push((
        "dual density",
        guard(
            dual_density_check(m, sigma, limit)
                .map(|r| Outcome::judge(r.holds, "eta* + dual eta* = sigma".to_string())),
        ),
    ));
    checks.push((
        "mkl",
        guard(mkl_solve(m, sigma, &MklOptions::default()).and_then(|sol| {
            let dev = sol.density.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let cert = length_certificate(m, sigma, &sol.density, 1e-9)?;
            Ok(Outcome::judge(
                sol.converged && dev <= MKL_TOL && cert.tight,
                format!(
                    "max deviation {dev:.2e}, gap {:.2e}, length certificate {}",
                    sol.duality_gap,
                    if cert.tight { "tight" } else { "loose" }
                ),
            ))
        })),
    ));
    for k in 1..=3 {
        let name = ["removal number k=1", "removal number k=2", "removal number k=3"][k - 1];
        checks.push((
            name,
            guard(inst.require_unweighted().and_then(|_| {
                let fast = removal_number(m, k)?;
                let slow = removal_oracle(m, k, limit)?;
                Ok(Outcome::judge(
                    fast.n_value == slow
                        && fast.covering_verified
                        && fast.rank_preserved
                        && fast.witness.count() == fast.n_value,
                    format!("N = {}, oracle {}", fast.n_value, slow),
                ))
            })),
        ));
    }
    checks.push((
        "truncation spectrum",
        guard(inst.require_unweighted().and_then(|_| {
            if m.len() > VERIFY_SPECTRUM_MAX {
                return Ok(Outcome::Skip(format!("more than {VERIFY_SPECTRUM_MAX} elements")));
            }
            let c = spectrum_consistency_check(m)?;
            Ok(Outcome::judge(c.passed(), format!("{} checks, {} failures", c.checks, c.failures.len())))
        })),
    ));
    if let Some(g) = &inst.graph {
        checks.push((
            "edge toughness c=1",
            guard(edge_toughness(g, 1).and_then(|tau| {
                let d = edge_toughness_direct(g, 1, limit)?;
                Ok(Outcome::judge(d == tau, format!("{} vs direct {}", q(&tau), q(&d))))
            })),
        ));
    }

    let mismatch = checks.iter().any(|(_, o)| matches!(o, Outcome::Fail(_)));
    let mut t = header(inst);
    t.push('\n');
    for (name, o) in &checks {
        let _ = writeln!(t, "{} {:<22} {}", o.status(), name, o.detail());
    }
    let mut csv = CsvOut::new("matdens-verify v1", &["check", "status", "detail"]);
    for (name, o) in &checks {
        csv.row([*name, o.status(), o.detail()]);
    }
    let json = json!({
        "checks": checks.iter().map(|(name, o)| json!({"check": name, "status": o.status(), "detail": o.detail()})).collect::<Vec<_>>(),
        "mismatch": mismatch,
    });
    Ok(Report { table: t, csv: csv.finish(), json, mismatch })
}
