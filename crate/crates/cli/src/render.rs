//! Human-readable tables and the versioned JSON envelope.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;
use thr_core::cubes::{P1Report, PnReport, PsigmaReport, WeightEntry};
use thr_core::homology::HomologyEntry;
use thr_core::IntMatrix;

use crate::commands::{BaseChangeReport, CommandError, NerveReport, Outcome, Pi0ThrReport, SelftestReport};
use crate::Format;

pub const SCHEMA_VERSION: u32 = 1;

pub fn outcome(o: &Outcome, format: Format) -> String {
    match format {
        Format::Table => o.table.clone(),
        Format::Json => {
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "command": o.command,
                "ok": o.ok,
                "report": o.report,
            });
            serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n"
        }
    }
}

pub fn error(e: &CommandError) -> String {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "ok": false,
        "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() },
    });
    serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n"
}

/// A ring element as a linear combination of generator names.
pub fn element(coeffs: &[BigInt], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if c.abs().is_one() {
            out.push_str(name);
        } else {
            let _ = write!(out, "{}*{name}", c.abs());
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn matrix(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", m.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")))
        .collect();
    if rows.is_empty() {
        format!("({}x{})", m.rows(), m.cols())
    } else {
        rows.join(" ")
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn homology_lines(out: &mut String, indent: &str, table: &[HomologyEntry]) {
    if table.is_empty() {
        let _ = writeln!(out, "{indent}(empty complex)");
    }
    for e in table {
        let _ = writeln!(out, "{indent}H_{:<3} {}", e.degree, e.display);
    }
}

fn compact(table: &[HomologyEntry]) -> String {
    let nonzero: Vec<String> =
        table.iter().filter(|e| !e.group.is_trivial()).map(|e| format!("H_{}={}", e.degree, e.display)).collect();
    if nonzero.is_empty() {
        "acyclic".into()
    } else {
        nonzero.join(" ")
    }
}

pub fn pi0thr(r: &Pi0ThrReport) -> String {
    let mut s = String::new();
    let m = &r.mackey;
    let _ = writeln!(s, "ring          generators {} ; additive group {}", r.ring.generators.join(", "), r.ring.additive);
    let _ = writeln!(s, "e-level       {}", m.e_level);
    let _ = writeln!(s, "g-level       {}  ({} generators, {} T_A relations)", m.g_level, m.g_generators, r.t_generators);
    let _ = writeln!(s, "w             {}", matrix(&m.w));
    let _ = writeln!(s, "res           {}", matrix(&m.res));
    let _ = writeln!(s, "tran          {}", matrix(&m.tran));
    let _ = writeln!(s, "alpha iso     {}  (Frobenius on A/2 surjective: {})", yes(r.alpha.alpha_iso), yes(r.alpha.frobenius_surjective));
    let _ = writeln!(
        s,
        "sequence      0 -> {} -> {} -> {} -> 0 exact: {}",
        r.ses.two_a,
        r.ses.fixed_level,
        r.ses.twisted_square,
        yes(r.ses.exact)
    );
    s
}

pub fn basechange(r: &BaseChangeReport) -> String {
    let mut s = String::new();
    let c = &r.comparison;
    let _ = writeln!(s, "map           {} -> {}", r.source.generators.join(", "), r.images.join(", "));
    let _ = writeln!(s, "base changed  e-level {} ; g-level {}", c.base_changed.e_level, c.base_changed.g_level);
    let _ = writeln!(s, "target        e-level {} ; g-level {}", c.target.e_level, c.target.g_level);
    let _ = writeln!(s, "iso           {}", yes(c.iso));
    if let Some(o) = &c.obstruction {
        let _ = writeln!(s, "obstruction   {o}");
    }
    if let (Some(e), Some(g)) = (&c.inverse_e, &c.inverse_g) {
        let _ = writeln!(s, "inverse e     {}", matrix(e));
        let _ = writeln!(s, "inverse g     {}", matrix(g));
    }
    s
}

pub fn nerve(r: &NerveReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "piece         {}", r.label);
    if let Some(sub) = &r.substitution {
        let _ = writeln!(s, "substitution  {sub}");
    }
    let _ = writeln!(s, "degree        {}", (0..=r.q_max).map(|q| format!("{q:>5}")).collect::<String>());
    let _ = writeln!(s, "simplices     {}", r.simplices.iter().map(|c| format!("{c:>5}")).collect::<String>());
    let _ = writeln!(s, "nondegenerate {}", r.nondegenerate.iter().map(|c| format!("{c:>5}")).collect::<String>());
    if let Some(h) = &r.homology {
        let _ = writeln!(s, "homology");
        homology_lines(&mut s, "  ", h);
    }
    if let Some(f) = &r.fixed_pi0 {
        let _ = writeln!(s, "fixed pi0     {} components (from degree {})", f.count, f.depth);
        for rep in &f.representatives {
            let _ = writeln!(s, "  {rep:?}");
        }
    }
    if let Some(v) = &r.validation {
        let _ = writeln!(s, "validation    {} ({} identities checked)", if v.ok { "ok" } else { "FAILED" }, v.checks);
        if let Some(bad) = &v.first_violation {
            let _ = writeln!(s, "  {} at degree {} on {:?}", bad.identity, bad.degree, bad.simplex);
        }
    }
    s
}

fn weight_line(s: &mut String, w: &WeightEntry) {
    let _ = writeln!(s, "  {:<14} {:<11} {}", format!("{:?}", w.weight), w.method, compact(&w.homology));
}

pub fn p1(r: &P1Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "projective line, weights |j| <= {}", r.max_weight);
    for w in &r.weights {
        weight_line(&mut s, w);
    }
    let mut subs: Vec<&String> = r.weights.iter().flat_map(|w| &w.substitutions).collect();
    subs.sort();
    subs.dedup();
    for sub in subs {
        let _ = writeln!(s, "substitution  {sub}");
    }
    let _ = writeln!(s, "certified     {}", yes(r.ok));
    s
}

pub fn psigma(r: &PsigmaReport) -> String {
    let mut s = String::new();
    let rows = |m: &[Vec<i64>]| m.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "right map     {}", rows(&r.right_unit));
    let _ = writeln!(s, "lower map     {}", rows(&r.lower_unit));
    let _ = writeln!(s, "rank [r | l]  {} of 4", r.stacked_rank);
    let _ = writeln!(s, "tfib(Q)       {}", compact(&r.tfib));
    let _ = writeln!(s, "Q cartesian   {}", yes(r.q_cartesian));
    let _ = writeln!(
        s,
        "mutant        entry {:?} flipped: cartesian {} ; tfib {}",
        r.mutation.entry,
        yes(r.mutation.cartesian),
        compact(&r.mutation.tfib)
    );
    for summand in &r.remaining {
        let _ = writeln!(s, "summand       {}: {}", summand.label, compact(&summand.homology));
    }
    for sub in &r.substitutions {
        let _ = writeln!(s, "substitution  {sub}");
    }
    let _ = writeln!(s, "certified     {}", yes(r.ok));
    s
}

pub fn pn(r: &PnReport) -> String {
    let mut s = String::new();
    let z = &r.zero_detail;
    let structural = r.nonzero_weights.iter().filter(|w| w.method == "structural").count();
    let _ = writeln!(s, "projective space n = {}, window {}", r.n, r.window);
    let _ = writeln!(
        s,
        "nonzero       {} weights, {} structural, all acyclic: {}",
        r.nonzero_weights.len(),
        structural,
        yes(r.all_nonzero_acyclic)
    );
    for sc in &r.spot_checks {
        let _ = writeln!(
            s,
            "spot check    weight {:?} cone {:?}: {} (expected {} circles) {}",
            sc.weight,
            sc.cone,
            compact(&sc.homology),
            sc.expected_circles,
            if sc.ok { "ok" } else { "MISMATCH" }
        );
    }
    let _ = writeln!(s, "weight 0      {} ; limit {}", compact(&r.weight_zero.homology), compact(&z.full_limit));
    let _ = writeln!(s, "  H_0 rank    {} (expected {})", z.assembled_h0_rank, z.expected_h0_rank);
    let _ = writeln!(s, "  reduced     tfib {}", compact(&z.reduced_tfib));
    let _ = writeln!(s, "  basepoint   tfib acyclic {}", yes(z.basepoint_tfib_acyclic));
    for st in &z.stages {
        let _ = writeln!(s, "  stage d={}   tfib {} (expected rank {})", st.d, compact(&st.tfib), st.expected_rank);
    }
    let rec_ok = z.recursion.iter().filter(|r| r.ok).count();
    let _ = writeln!(s, "  recursion   {} of {} directions agree", rec_ok, z.recursion.len());
    for h in &r.h_maps {
        let _ = writeln!(s, "h map d={}     cofiber {} {}", h.d, compact(&h.cofiber), if h.ok { "ok" } else { "MISMATCH" });
    }
    let _ = writeln!(s, "certified     {}", yes(r.ok));
    s
}

pub fn selftest(r: &SelftestReport) -> String {
    let mut s = String::new();
    for c in &r.criteria {
        let _ = writeln!(s, "{}", c.line());
    }
    let _ = writeln!(s, "{} of {} criteria passed", r.passed, r.total);
    s
}
