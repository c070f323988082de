//! Executing a task into a report.

use crate::report::{Location, Record, Report};
use crate::task::{
    coefficients, compute, formations, required_group, schema, select_subgroups, CliError, FormationInput, Loader,
    TaskFile, TaskKind,
};
use hyperclass::groupmod::{FiniteGroup, GComplex, Subgroup};
use hyperclass::io::{ModuleJson, WeilJson};
use hyperclass::reciprocity::{cup_iso_table, verify_tate_nakayama, ModulePairing};
use hyperclass::sample::{random_complex, rng};
use hyperclass::shiftmod::{lower_terms_vanish, trivialize_complex, DEFAULT_RANK_BUDGET};
use hyperclass::tate::{norm_quotient, TateComplex};
use hyperclass::weil::{
    build_weil_group_with, compare_artin, verify_class_complex, verify_weil_axioms, ClassComplex, WeilGroupData,
    WeilOptions,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

pub const DEFAULT_WINDOW: usize = 5;

/// Command-line values that take precedence over the task file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub window: Option<usize>,
    pub seed: Option<u64>,
    pub rank_budget: Option<usize>,
    pub parallel: bool,
}

struct Settings {
    window: usize,
    seed: u64,
    budget: usize,
    parallel: bool,
}

/// Per-unit output: records, notes, outputs and timings.
#[derive(Default)]
struct Part {
    records: Vec<Record>,
    notes: Vec<String>,
    outputs: BTreeMap<String, Value>,
    timings: BTreeMap<String, f64>,
}

impl Part {
    fn absorb(&mut self, o: Part) {
        self.records.extend(o.records);
        self.notes.extend(o.notes);
        self.outputs.extend(o.outputs);
        self.timings.extend(o.timings);
    }
}

fn map_units<T: Sync, R: Send>(items: &[T], parallel: bool, f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

fn millis(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

pub fn run_task(t: &TaskFile, base: &Path, o: &Overrides) -> Result<Report, CliError> {
    let start = Instant::now();
    let s = Settings {
        window: o.window.or(t.window).unwrap_or(DEFAULT_WINDOW),
        seed: o.seed.or(t.seed).unwrap_or(0),
        budget: o.rank_budget.or(t.rank_budget).unwrap_or(DEFAULT_RANK_BUDGET),
        parallel: o.parallel,
    };
    let l = Loader { base: base.to_path_buf() };
    let part = match t.kind {
        TaskKind::Cohomology | TaskKind::Hypercohomology => cohomology(t, &l, &s)?,
        TaskKind::Shift => shift(t, &l, &s)?,
        TaskKind::TateNakayama => tate_nakayama(t, &l, &s)?,
        TaskKind::BuildWeil => build(t, &l, &s)?,
        TaskKind::VerifyWeil => suite(t, &l, &s, false)?,
        TaskKind::ExampleSuite => suite(t, &l, &s, true)?,
    };
    let mut rep = Report {
        task: serde_json::to_value(t).map_err(schema)?,
        seed: s.seed,
        window: s.window,
        rank_budget: s.budget,
        records: part.records,
        notes: part.notes,
        outputs: part.outputs,
        timings: part.timings,
        ..Default::default()
    };
    rep.timings.insert("total".into(), millis(start));
    rep.finish();
    Ok(rep)
}

fn q_range(t: &TaskFile, default: [i32; 2]) -> Result<Vec<i32>, CliError> {
    let [lo, hi] = t.q.unwrap_or(default);
    if lo > hi {
        return Err(CliError::Schema(format!("empty degree range [{lo}, {hi}]")));
    }
    Ok((lo..=hi).collect())
}

fn expected_for(t: &TaskFile, h: &Subgroup, q: i32) -> Option<String> {
    let whole = h.order() == h.parent().order();
    t.expected.get(&format!("{}:{q}", h.label())).or_else(|| whole.then(|| t.expected.get(&q.to_string())).flatten()).cloned()
}

fn cohomology(t: &TaskFile, l: &Loader, s: &Settings) -> Result<Part, CliError> {
    let g = required_group(t, l)?;
    let c = coefficients(t, l, &g)?;
    let subs = select_subgroups(t, &g)?;
    let qs = q_range(t, [-2, 2])?;
    let ctx = match t.kind {
        TaskKind::Hypercohomology => "hypercohomology",
        _ => "cohomology",
    };
    let top = c.range().map(|r| r.1);
    let parts = map_units(&subs, s.parallel, |h| -> Result<Vec<Record>, CliError> {
        let tc = TateComplex::tate_over(h, &c, s.window).map_err(compute)?;
        let mut out = Vec::new();
        for &q in &qs {
            let got = tc.cohomology(q).map_err(compute)?.to_string();
            let loc = Location::new(ctx, "tate").at(h.label()).deg(q);
            out.push(match expected_for(t, h, q) {
                Some(e) => Record::check(loc, e, got.clone()),
                None => Record::info(loc, got.clone()),
            });
            // a second route where one exists
            let Some(n) = top else { continue };
            if q > n {
                let ord = TateComplex::ordinary_over(h, &c, q).and_then(|o| o.cohomology(q)).map_err(compute)?;
                out.push(Record::check(Location::new(ctx, "ordinary route").at(h.label()).deg(q), ord.to_string(), got));
            } else if q == n {
                let nq = TateComplex::ordinary_over(h, &c, n).and_then(|o| norm_quotient(&o, n)).map_err(compute)?;
                out.push(Record::check(Location::new(ctx, "norm quotient").at(h.label()).deg(q), nq.to_string(), got));
            }
        }
        Ok(out)
    });
    let mut part = Part::default();
    for p in parts {
        part.records.extend(p?);
    }
    if top.is_none() {
        part.notes.push("coefficients are zero".into());
    }
    Ok(part)
}

fn shift_records(ctx: &str, c: &GComplex, s: &Settings) -> Result<(Part, hyperclass::groupmod::GModule, i32), CliError> {
    let (a, n, cert) = trivialize_complex(c, s.window, s.budget).map_err(compute)?;
    let mut part = Part::default();
    for r in &cert.table.rows {
        let loc = Location::new(ctx, &format!("module in degree {n}")).at(r.subgroup.clone()).deg(r.q);
        part.records.push(Record::flag(loc, r.input.clone(), r.output.clone(), r.ok));
    }
    let summary = cert.summary();
    for (i, st) in summary.steps.iter().enumerate() {
        let ranks = st.ranks.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        let loc = Location::new(ctx, &format!("step {i} {}", st.kind));
        part.records.push(Record::flag(loc, "verified", format!("ranks {ranks}"), st.ok));
    }
    let low = lower_terms_vanish(&cert).map_err(compute)?;
    part.records.push(Record::check(Location::new(ctx, "lower terms acyclic"), "true", low.to_string()));
    part.notes.push(summary.note);
    Ok((part, a, n))
}

fn shift(t: &TaskFile, l: &Loader, s: &Settings) -> Result<Part, CliError> {
    let g = required_group(t, l)?;
    let c = coefficients(t, l, &g)?;
    let (mut part, a, n) = shift_records("shift", &c, s)?;
    part.outputs.insert("degree".into(), json!(n));
    part.outputs.insert("module".into(), serde_json::to_value(ModuleJson::from_module(&a).map_err(compute)?).map_err(compute)?);
    part.outputs.insert("module_group".into(), json!(a.underlying().to_string()));
    Ok(part)
}

fn weil_options(t: &TaskFile, s: &Settings) -> WeilOptions {
    WeilOptions { beta_multiple: t.beta_multiple.unwrap_or(1), perturbation: None, rank_budget: s.budget }
}

fn built(fi: &FormationInput, t: &TaskFile, l: &Loader, s: &Settings) -> Result<(ClassComplex, WeilGroupData), CliError> {
    let cc = fi.load(t, l)?;
    let wd = build_weil_group_with(&cc, &weil_options(t, s)).map_err(compute)?;
    Ok((cc, wd))
}

fn tate_nakayama(t: &TaskFile, l: &Loader, s: &Settings) -> Result<Part, CliError> {
    let qs = q_range(t, [-3, 1])?;
    let q0 = t.q0.unwrap_or(0);
    let mut part = Part::default();
    for fi in formations(t, false)? {
        let label = fi.label();
        let (_, wd) = built(&fi, t, l, s)?;
        let rep = verify_tate_nakayama(&ModulePairing::scalar(&wd.a), &wd.alpha_a, q0, &qs).map_err(compute)?;
        for (rows, what) in [(&rep.hypothesis, "Sylow"), (&rep.conclusion, "cup")] {
            for r in rows {
                let loc = Location::new(&label, &format!("{what} {}", r.check)).at(r.subgroup.clone()).deg(r.q);
                part.records.push(Record::flag(loc, r.check.clone(), format!("{} -> {}", r.source, r.target), r.ok));
            }
        }
        if !rep.hypothesis_ok {
            part.records.push(Record::check(Location::new(&label, "hypothesis"), "holds", "fails"));
        }
        part.notes.push(rep.note.clone());
    }
    Ok(part)
}

fn shown(detail: &str, ok: bool) -> String {
    match (detail.is_empty(), ok) {
        (false, _) => detail.to_string(),
        (true, true) => "holds".into(),
        (true, false) => "fails".into(),
    }
}

fn local_records(label: &str, wd: &WeilGroupData) -> Vec<Record> {
    wd.local_checks()
        .map(|c| Record::flag(Location::new(label, &c.check).at(c.subgroup.clone()), "holds", shown(&c.detail, c.ok), c.ok))
        .collect()
}

fn build(t: &TaskFile, l: &Loader, s: &Settings) -> Result<Part, CliError> {
    let fs = formations(t, false)?;
    if fs.len() != 1 {
        return Err(CliError::Schema("build-weil takes exactly one formation".into()));
    }
    let label = fs[0].label();
    let (_, wd) = built(&fs[0], t, l, s)?;
    let mut part = Part { records: local_records(&label, &wd), ..Default::default() };
    let wj = WeilJson::from_data(&wd).map_err(compute)?;
    part.outputs.insert("weil".into(), serde_json::to_value(wj).map_err(compute)?);
    part.outputs.insert("abelianization".into(), json!(wd.weil.abelianization().group.to_string()));
    part.outputs.insert("kernel".into(), json!(wd.cl.underlying().to_string()));
    part.outputs.insert("kernel_rank".into(), json!(wd.cl.rank()));
    Ok(part)
}

fn gate_records(label: &str, cc: &ClassComplex) -> Result<(Vec<Record>, bool), CliError> {
    let rep = verify_class_complex(cc).map_err(compute)?;
    let mut out = Vec::new();
    for r in &rep.rows {
        let cyclic = if r.order == 1 { "0".to_string() } else { format!("Z/{}", r.order) };
        out.push(Record::check(Location::new(label, "class complex H^1").at(r.subgroup.clone()).deg(1), "0", r.h1.clone()));
        out.push(Record::check(Location::new(label, "class complex H^2").at(r.subgroup.clone()).deg(2), cyclic, r.h2.clone()));
        out.push(Record::check(
            Location::new(label, "order of restricted class").at(r.subgroup.clone()).deg(2),
            r.order.to_string(),
            r.res_alpha_order.clone(),
        ));
    }
    Ok((out, rep.passed))
}

fn formation_part(fi: &FormationInput, t: &TaskFile, l: &Loader, s: &Settings, cup: Option<&[i32]>) -> Result<Part, CliError> {
    let start = Instant::now();
    let label = fi.label();
    let cc = fi.load(t, l)?;
    let (records, ok) = gate_records(&label, &cc)?;
    let mut part = Part { records, ..Default::default() };
    if !ok {
        part.notes.push(format!("{label}: not a class complex, no Weil group built"));
        return Ok(part);
    }
    let wd = build_weil_group_with(&cc, &weil_options(t, s)).map_err(compute)?;
    part.records.extend(local_records(&label, &wd));
    let axioms = verify_weil_axioms(&wd).map_err(compute)?;
    for r in &axioms.rows {
        let loc = Location::new(&label, &format!("axiom {}", r.axiom)).at(r.location.clone());
        part.records.push(Record::flag(loc, "holds", shown(&r.detail, r.ok), r.ok));
    }
    if !axioms.all_passed() {
        part.notes.push(format!("{label}: axioms fail, Artin maps skipped"));
        return Ok(part);
    }
    let artin = compare_artin(&wd).map_err(compute)?;
    let desc = format!("{} elements of {} into {}", artin.elements, artin.source, artin.target);
    part.records.push(Record::flag(Location::new(&label, "Artin routes agree"), "agree", desc, artin.agree));
    for (x, y) in &artin.images {
        part.records.push(Record::info(Location::new(&label, &format!("Artin image of ({})", x.join(","))), format!("({})", y.join(","))));
    }
    if let Some(qs) = cup {
        let rows = cup_iso_table(&ModulePairing::scalar(&wd.a), &wd.alpha_a, qs).map_err(compute)?;
        for r in rows {
            let loc = Location::new(&label, "cup with class").at(r.subgroup.clone()).deg(r.q);
            part.records.push(Record::flag(loc, "iso", format!("{} -> {}", r.source, r.target), r.ok));
        }
    }
    part.timings.insert(format!("formation {label}"), millis(start));
    Ok(part)
}

const RANDOM_GROUPS: [&str; 6] = ["C2", "C3", "C4", "V4", "S3", "C6"];

fn suite(t: &TaskFile, l: &Loader, s: &Settings, full: bool) -> Result<Part, CliError> {
    let fs = formations(t, full)?;
    let qs = if full { Some(q_range(t, [-3, 1])?) } else { None };
    let mut part = Part::default();
    for p in map_units(&fs, s.parallel, |fi| formation_part(fi, t, l, s, qs.as_deref())) {
        part.absorb(p?);
    }
    part.notes.push("axiom 2 is checked on a generating set of the Weil group".into());
    let n = t.random.unwrap_or(0);
    if n > 0 {
        let mut r = rng(s.seed);
        let complexes: Vec<(usize, &str, GComplex)> = (0..n)
            .map(|i| {
                let name = RANDOM_GROUPS[i % RANDOM_GROUPS.len()];
                let g = FiniteGroup::named(name).expect("known group");
                (i, name, random_complex(&mut r, &g, 3, 2))
            })
            .collect();
        let parts = map_units(&complexes, s.parallel, |(i, name, c)| {
            shift_records(&format!("random {i:03} over {name}"), c, s).map(|x| x.0)
        });
        for p in parts {
            part.absorb(p?);
        }
    }
    Ok(part)
}
