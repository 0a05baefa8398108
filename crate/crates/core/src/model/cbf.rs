//! Conic Benchmark Format (CBF, version 2) export and import.
//!
//! Supported subset: `VER`, `OBJSENSE`, `VAR`, `INT`, `CON` with cones
//! `F`, `L+`, `L-`, `L=`, `PSDCON`, `OBJACOORD`, `OBJBCOORD`, `ACOORD`,
//! `BCOORD`, `HCOORD`, `DCOORD`.
//!
//! Variable bounds that the `VAR` cones cannot express become extra `CON`
//! rows after the model's own rows. Names, exact domains, the provenance tag
//! and the objective constant travel in `# misdp …` comment lines, so a file
//! written here reads back into an identical model. Files without those
//! comments are still accepted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{
    CoefMatrix, LinearRow, MatrixPencil, MisdpModel, ModelError, Objective, Relation, Sense, VarDomain, Variable,
};

/// CBF text plus warnings about lossy domain encodings.
#[derive(Debug, Clone, PartialEq)]
pub struct CbfExport {
    pub text: String,
    pub warnings: Vec<String>,
}

/// 17 significant digits, integers written plainly.
fn num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.16e}")
    }
}

fn opt_num(v: Option<f64>, inf: &str) -> String {
    v.map_or_else(|| inf.to_string(), num)
}

fn domain_spec(v: &Variable) -> String {
    let base = match &v.domain {
        VarDomain::Continuous { lo: None, hi: None } => "continuous".to_string(),
        VarDomain::Continuous { lo, hi } => format!("continuous[{},{}]", opt_num(*lo, "-inf"), opt_num(*hi, "inf")),
        VarDomain::Binary => "binary".into(),
        VarDomain::Ternary => "ternary".into(),
        VarDomain::IntegerRange { lo, hi } => format!("int[{lo},{hi}]"),
        VarDomain::FiniteSet { values } => {
            format!("set{{{}}}", values.iter().map(|&x| num(x)).collect::<Vec<_>>().join(","))
        }
    };
    if v.implied_integer {
        base + "~int"
    } else {
        base
    }
}

fn parse_domain_spec(s: &str) -> Option<(VarDomain, bool)> {
    let (s, implied) = match s.strip_suffix("~int") {
        Some(b) => (b, true),
        None => (s, false),
    };
    let bound = |t: &str| -> Option<Option<f64>> {
        match t {
            "-inf" | "inf" => Some(None),
            _ => t.parse().ok().map(Some),
        }
    };
    let dom = if s == "continuous" {
        VarDomain::free()
    } else if let Some(r) = s.strip_prefix("continuous[").and_then(|r| r.strip_suffix(']')) {
        let (a, b) = r.split_once(',')?;
        VarDomain::Continuous { lo: bound(a)?, hi: bound(b)? }
    } else if s == "binary" {
        VarDomain::Binary
    } else if s == "ternary" {
        VarDomain::Ternary
    } else if let Some(r) = s.strip_prefix("int[").and_then(|r| r.strip_suffix(']')) {
        let (a, b) = r.split_once(',')?;
        VarDomain::IntegerRange { lo: a.parse().ok()?, hi: b.parse().ok()? }
    } else if let Some(r) = s.strip_prefix("set{").and_then(|r| r.strip_suffix('}')) {
        let values = if r.is_empty() {
            Vec::new()
        } else {
            r.split(',').map(|t| t.parse().ok()).collect::<Option<Vec<f64>>>()?
        };
        VarDomain::FiniteSet { values }
    } else {
        return None;
    };
    Some((dom, implied))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cone {
    Free,
    NonNeg,
    NonPos,
    Zero,
}

impl Cone {
    fn tag(self) -> &'static str {
        match self {
            Cone::Free => "F",
            Cone::NonNeg => "L+",
            Cone::NonPos => "L-",
            Cone::Zero => "L=",
        }
    }

    fn parse(s: &str) -> Option<Cone> {
        Some(match s {
            "F" => Cone::Free,
            "L+" => Cone::NonNeg,
            "L-" => Cone::NonPos,
            "L=" => Cone::Zero,
            _ => return None,
        })
    }
}

/// `(lo, hi, integer)` as written to CBF.
fn cbf_bounds(v: &Variable, warnings: &mut Vec<String>) -> Result<(Option<f64>, Option<f64>, bool), ModelError> {
    Ok(match &v.domain {
        VarDomain::Continuous { lo, hi } => (*lo, *hi, false),
        VarDomain::FiniteSet { values } => {
            if values.iter().any(|x| x.fract() != 0.0) {
                return Err(ModelError::UnsupportedDomain(format!(
                    "variable `{}` has a non-integer finite set",
                    v.name
                )));
            }
            let (lo, hi) = v.domain.bounds();
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            sorted.dedup();
            if sorted.len() as f64 != hi - lo + 1.0 {
                warnings.push(format!(
                    "variable `{}`: finite set {{{}}} exported as its integer hull [{}, {}]",
                    v.name,
                    sorted.iter().map(|&x| num(x)).collect::<Vec<_>>().join(","),
                    num(lo),
                    num(hi)
                ));
            }
            (Some(lo), Some(hi), true)
        }
        d => {
            let (lo, hi) = d.bounds();
            (Some(lo), Some(hi), true)
        }
    })
}

/// Writes the model as CBF. Coordinates are sorted (constraint, variable,
/// row, column); non-integers carry 17 significant digits.
pub fn export_cbf(m: &MisdpModel) -> Result<CbfExport, ModelError> {
    let defects = m.validate();
    if !defects.is_empty() {
        return Err(ModelError::Invalid(defects.into_iter().map(|d| d.0).collect()));
    }
    let mut warnings = Vec::new();
    let mut out = String::new();
    let w = &mut out;

    writeln!(w, "# misdp model").ok();
    writeln!(w, "# misdp provenance {}", if m.provenance.is_empty() { "-" } else { &m.provenance }).ok();
    let true_sign = match m.objective.sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };
    writeln!(w, "# misdp objconst {}", num(true_sign * m.objective.constant)).ok();
    for (i, v) in m.variables.iter().enumerate() {
        writeln!(w, "# misdp var {i} {} {}", v.name, domain_spec(v)).ok();
    }
    for (i, r) in m.rows.iter().enumerate() {
        writeln!(w, "# misdp row {i} {}", label(&r.name)).ok();
    }
    for (k, p) in m.pencils.iter().enumerate() {
        writeln!(w, "# misdp pencil {k} {}", label(&p.name)).ok();
    }
    writeln!(w, "# misdp modelrows {}", m.rows.len()).ok();
    writeln!(w, "VER\n2\n").ok();
    let sense = match m.objective.sense {
        Sense::Min => "MIN",
        Sense::Max => "MAX",
    };
    writeln!(w, "OBJSENSE\n{sense}\n").ok();

    // Variable cones, then bound rows for everything the cone leaves open.
    let mut var_cones = Vec::with_capacity(m.num_vars());
    let mut ints = Vec::new();
    let mut bound_rows: Vec<(usize, f64, Cone)> = Vec::new();
    for (i, v) in m.variables.iter().enumerate() {
        let (lo, hi, int) = cbf_bounds(v, &mut warnings)?;
        if int {
            ints.push(i);
        }
        let cone = if lo == Some(0.0) { Cone::NonNeg } else { Cone::Free };
        var_cones.push(cone);
        if let Some(l) = lo {
            if cone != Cone::NonNeg {
                bound_rows.push((i, l, Cone::NonNeg));
            }
        }
        if let Some(h) = hi {
            bound_rows.push((i, h, Cone::NonPos));
        }
    }
    write_cones(w, "VAR", &var_cones);

    if !ints.is_empty() {
        writeln!(w, "INT\n{}", ints.len()).ok();
        for i in &ints {
            writeln!(w, "{i}").ok();
        }
        writeln!(w).ok();
    }

    let mut row_cones: Vec<Cone> = m
        .rows
        .iter()
        .map(|r| match r.rel {
            Relation::Eq => Cone::Zero,
            Relation::Le => Cone::NonPos,
            Relation::Ge => Cone::NonNeg,
        })
        .collect();
    row_cones.extend(bound_rows.iter().map(|b| b.2));
    if !row_cones.is_empty() {
        write_cones(w, "CON", &row_cones);
    }

    if !m.pencils.is_empty() {
        writeln!(w, "PSDCON\n{}", m.pencils.len()).ok();
        for p in &m.pencils {
            writeln!(w, "{}", p.order).ok();
        }
        writeln!(w).ok();
    }

    let obj: Vec<String> = m.objective.terms.iter().map(|&(v, c)| format!("{v} {}", num(true_sign * c))).collect();
    write_coords(w, "OBJACOORD", &obj);

    let mut acoord = Vec::new();
    let mut bcoord = Vec::new();
    for (i, r) in m.rows.iter().enumerate() {
        for &(v, c) in &r.terms {
            acoord.push(format!("{i} {v} {}", num(c)));
        }
        if r.rhs != 0.0 {
            bcoord.push(format!("{i} {}", num(-r.rhs)));
        }
    }
    for (k, &(v, b, _)) in bound_rows.iter().enumerate() {
        let i = m.rows.len() + k;
        acoord.push(format!("{i} {v} 1"));
        if b != 0.0 {
            bcoord.push(format!("{i} {}", num(-b)));
        }
    }
    write_coords(w, "ACOORD", &acoord);
    write_coords(w, "BCOORD", &bcoord);

    let mut hcoord = Vec::new();
    let mut dcoord = Vec::new();
    for (k, p) in m.pencils.iter().enumerate() {
        for (v, a) in &p.terms {
            for (r, c, x) in a.lower() {
                hcoord.push(format!("{k} {v} {r} {c} {}", num(x)));
            }
        }
        for (r, c, x) in p.constant.lower() {
            dcoord.push(format!("{k} {r} {c} {}", num(x)));
        }
    }
    write_coords(w, "HCOORD", &hcoord);
    write_coords(w, "DCOORD", &dcoord);

    while out.ends_with("\n\n") {
        out.pop();
    }
    Ok(CbfExport { text: out, warnings })
}

fn label(s: &str) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.split_whitespace().collect::<Vec<_>>().join("_")
    }
}

fn write_cones(w: &mut String, head: &str, cones: &[Cone]) {
    let mut groups: Vec<(Cone, usize)> = Vec::new();
    for &c in cones {
        match groups.last_mut() {
            Some((g, n)) if *g == c => *n += 1,
            _ => groups.push((c, 1)),
        }
    }
    writeln!(w, "{head}\n{} {}", cones.len(), groups.len()).ok();
    for (c, n) in groups {
        writeln!(w, "{} {n}", c.tag()).ok();
    }
    writeln!(w).ok();
}

fn write_coords(w: &mut String, head: &str, lines: &[String]) {
    if lines.is_empty() {
        return;
    }
    writeln!(w, "{head}\n{}", lines.len()).ok();
    for l in lines {
        writeln!(w, "{l}").ok();
    }
    writeln!(w).ok();
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, &'a str), ModelError> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(ModelError::Parse { line: self.last + 1, msg: "unexpected end of file".into() }),
        }
    }

    fn fields<T: std::str::FromStr>(&mut self, count: usize) -> Result<(usize, Vec<T>), ModelError> {
        let (n, l) = self.next()?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != count {
            return Err(ModelError::Parse { line: n, msg: format!("expected {count} fields, found {}", toks.len()) });
        }
        let vals = toks
            .iter()
            .map(|t| t.parse::<T>().map_err(|_| ModelError::Parse { line: n, msg: format!("bad value `{t}`") }))
            .collect::<Result<Vec<T>, _>>()?;
        Ok((n, vals))
    }

    fn one<T: std::str::FromStr>(&mut self) -> Result<(usize, T), ModelError> {
        let (n, mut v) = self.fields::<T>(1)?;
        Ok((n, v.remove(0)))
    }
}

fn perr(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Parse { line, msg: msg.into() }
}

#[derive(Default)]
struct Meta {
    provenance: Option<String>,
    objconst: Option<f64>,
    vars: BTreeMap<usize, (String, VarDomain, bool)>,
    rows: BTreeMap<usize, String>,
    pencils: BTreeMap<usize, String>,
    model_rows: Option<usize>,
}

fn read_meta(line_no: usize, body: &str, meta: &mut Meta) -> Result<(), ModelError> {
    let toks: Vec<&str> = body.split_whitespace().collect();
    let bad = || perr(line_no, format!("malformed metadata `{body}`"));
    let idx = |t: Option<&&str>| -> Result<usize, ModelError> { t.and_then(|s| s.parse().ok()).ok_or_else(bad) };
    match toks.first().copied() {
        Some("model") | None => {}
        Some("provenance") => {
            let p = toks.get(1).ok_or_else(bad)?;
            meta.provenance = Some(if *p == "-" { String::new() } else { p.to_string() });
        }
        Some("objconst") => meta.objconst = Some(toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(bad)?),
        Some("var") => {
            let i = idx(toks.get(1))?;
            let name = toks.get(2).ok_or_else(bad)?;
            let (dom, implied) = toks.get(3).and_then(|s| parse_domain_spec(s)).ok_or_else(bad)?;
            meta.vars.insert(i, (name.to_string(), dom, implied));
        }
        Some("row") => {
            let i = idx(toks.get(1))?;
            meta.rows.insert(i, toks.get(2).map_or(String::new(), |s| if *s == "-" { String::new() } else { s.to_string() }));
        }
        Some("pencil") => {
            let i = idx(toks.get(1))?;
            meta.pencils.insert(i, toks.get(2).map_or(String::new(), |s| if *s == "-" { String::new() } else { s.to_string() }));
        }
        Some("modelrows") => meta.model_rows = Some(idx(toks.get(1))?),
        Some(_) => return Err(bad()),
    }
    Ok(())
}

/// Parses CBF text. Errors carry the 1-based line number.
pub fn import_cbf(text: &str) -> Result<MisdpModel, ModelError> {
    let mut meta = Meta::default();
    for (i, l) in text.lines().enumerate() {
        if let Some(body) = l.trim().strip_prefix("# misdp") {
            read_meta(i + 1, body.trim(), &mut meta)?;
        }
    }
    let content: Box<dyn Iterator<Item = (usize, &str)>> = Box::new(
        text.lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
    );
    let mut lines = Lines { inner: content.peekable(), last: 0 };

    let mut sense = Sense::Min;
    let mut var_cones: Vec<Cone> = Vec::new();
    let mut ints: Vec<usize> = Vec::new();
    let mut con_cones: Vec<Cone> = Vec::new();
    let mut psd_orders: Vec<usize> = Vec::new();
    let mut obj: Vec<(usize, f64)> = Vec::new();
    let mut obj_const = 0.0;
    let mut acoord: Vec<(usize, usize, f64)> = Vec::new();
    let mut bcoord: Vec<(usize, f64)> = Vec::new();
    let mut hcoord: Vec<(usize, usize, usize, usize, f64)> = Vec::new();
    let mut dcoord: Vec<(usize, usize, usize, f64)> = Vec::new();
    let mut saw_ver = false;

    let read_cones = |lines: &mut Lines<'_>| -> Result<Vec<Cone>, ModelError> {
        let (n0, head) = lines.fields::<usize>(2)?;
        let mut cones = Vec::with_capacity(head[0]);
        for _ in 0..head[1] {
            let (n, l) = lines.next()?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            let (cone, count) = match toks.as_slice() {
                [c, k] => (
                    Cone::parse(c).ok_or_else(|| perr(n, format!("unsupported cone `{c}`")))?,
                    k.parse::<usize>().map_err(|_| perr(n, "bad cone size"))?,
                ),
                _ => return Err(perr(n, "expected `<cone> <size>`")),
            };
            cones.extend(std::iter::repeat(cone).take(count));
        }
        if cones.len() != head[0] {
            return Err(perr(n0, format!("cone sizes sum to {}, header says {}", cones.len(), head[0])));
        }
        Ok(cones)
    };

    while lines.inner.peek().is_some() {
        let (n, key) = lines.next()?;
        match key {
            "VER" => {
                let (vn, v) = lines.one::<u32>()?;
                if !(1..=3).contains(&v) {
                    return Err(perr(vn, format!("unsupported version {v}")));
                }
                saw_ver = true;
            }
            "OBJSENSE" => {
                let (sn, s) = lines.next()?;
                sense = match s {
                    "MIN" => Sense::Min,
                    "MAX" => Sense::Max,
                    _ => return Err(perr(sn, format!("bad objective sense `{s}`"))),
                };
            }
            "VAR" => var_cones = read_cones(&mut lines)?,
            "CON" => con_cones = read_cones(&mut lines)?,
            "INT" => {
                let (_, k) = lines.one::<usize>()?;
                for _ in 0..k {
                    ints.push(lines.one::<usize>()?.1);
                }
            }
            "PSDCON" => {
                let (_, k) = lines.one::<usize>()?;
                for _ in 0..k {
                    psd_orders.push(lines.one::<usize>()?.1);
                }
            }
            "OBJACOORD" => {
                let (_, k) = lines.one::<usize>()?;
                for _ in 0..k {
                    let (ln, l) = lines.next()?;
                    let (j, v) = pair(ln, l)?;
                    obj.push((j, v));
                }
            }
            "OBJBCOORD" => obj_const += lines.one::<f64>()?.1,
            "ACOORD" => {
                let (_, k) = lines.one::<usize>()?;
                for _ in 0..k {
                    let (ln, l) = lines.next()?;
                    let t = tokens(ln, l, 3)?;
                    acoord.push((uint(ln, t[0])?, uint(ln, t[1])?, float(ln, t[2])?));
                }
            }
            "BCOORD" => {
                let (_, k) = lines.one::<usize>()?;
                for _ in 0..k {
                    let (ln, l) = lines.next()?;
                    bcoord.push(pair(ln, l)?);
                }
            }
            "HCOORD" => {
                let (_, k) = lines.one::<usize>()?;
                for _ in 0..k {
                    let (ln, l) = lines.next()?;
                    let t = tokens(ln, l, 5)?;
                    hcoord.push((uint(ln, t[0])?, uint(ln, t[1])?, uint(ln, t[2])?, uint(ln, t[3])?, float(ln, t[4])?));
                }
            }
            "DCOORD" => {
                let (_, k) = lines.one::<usize>()?;
                for _ in 0..k {
                    let (ln, l) = lines.next()?;
                    let t = tokens(ln, l, 4)?;
                    dcoord.push((uint(ln, t[0])?, uint(ln, t[1])?, uint(ln, t[2])?, float(ln, t[3])?));
                }
            }
            other => return Err(perr(n, format!("unsupported section `{other}`"))),
        }
    }
    if !saw_ver {
        return Err(perr(1, "missing VER section"));
    }

    let nv = var_cones.len();
    let nr = con_cones.len();
    let np = psd_orders.len();
    let check = |line_hint: &str, ok: bool| -> Result<(), ModelError> {
        if ok {
            Ok(())
        } else {
            Err(perr(lines.last, format!("{line_hint} index out of range")))
        }
    };
    check("INT", ints.iter().all(|&i| i < nv))?;
    check("OBJACOORD", obj.iter().all(|&(j, _)| j < nv))?;
    check("ACOORD", acoord.iter().all(|&(i, j, _)| i < nr && j < nv))?;
    check("BCOORD", bcoord.iter().all(|&(i, _)| i < nr))?;
    check(
        "HCOORD",
        hcoord.iter().all(|&(k, j, r, c, _)| k < np && j < nv && r < psd_orders[k] && c < psd_orders[k]),
    )?;
    check("DCOORD", dcoord.iter().all(|&(k, r, c, _)| k < np && r < psd_orders[k] && c < psd_orders[k]))?;

    // Rows as read from the file, before splitting off bound rows.
    let mut row_terms: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nr];
    for &(i, j, v) in &acoord {
        row_terms[i].push((j, v));
    }
    let mut row_const = vec![0.0; nr];
    for &(i, v) in &bcoord {
        row_const[i] += v;
    }
    let model_rows = meta.model_rows.unwrap_or(nr).min(nr);

    // Domains: metadata wins, otherwise derive from cones, INT and
    // single-variable rows.
    let mut lo: Vec<Option<f64>> = var_cones.iter().map(|c| (*c == Cone::NonNeg).then_some(0.0)).collect();
    let mut hi: Vec<Option<f64>> = var_cones.iter().map(|c| (*c == Cone::NonPos).then_some(0.0)).collect();
    for i in 0..nr {
        if let [(v, a)] = row_terms[i].as_slice() {
            if *a == 0.0 {
                continue;
            }
            let bound = -row_const[i] / a;
            let (is_lo, is_hi) = match (con_cones[i], *a > 0.0) {
                (Cone::NonNeg, true) | (Cone::NonPos, false) => (true, false),
                (Cone::NonPos, true) | (Cone::NonNeg, false) => (false, true),
                (Cone::Zero, _) => (true, true),
                (Cone::Free, _) => (false, false),
            };
            if is_lo && i >= model_rows || is_lo && meta.model_rows.is_none() {
                lo[*v] = Some(lo[*v].map_or(bound, |l: f64| l.max(bound)));
            }
            if is_hi && i >= model_rows || is_hi && meta.model_rows.is_none() {
                hi[*v] = Some(hi[*v].map_or(bound, |h: f64| h.min(bound)));
            }
        }
    }
    let mut variables = Vec::with_capacity(nv);
    for i in 0..nv {
        if let Some((name, dom, implied)) = meta.vars.get(&i) {
            variables.push(Variable { name: name.clone(), domain: dom.clone(), implied_integer: *implied });
            continue;
        }
        let domain = if ints.contains(&i) {
            match (lo[i], hi[i]) {
                (Some(l), Some(h)) => {
                    let (l, h) = (l.ceil() as i64, h.floor() as i64);
                    match (l, h) {
                        (0, 1) => VarDomain::Binary,
                        (-1, 1) => VarDomain::Ternary,
                        _ => VarDomain::IntegerRange { lo: l, hi: h },
                    }
                }
                _ => return Err(perr(lines.last, format!("integer variable {i} has no finite bounds"))),
            }
        } else {
            VarDomain::Continuous { lo: lo[i], hi: hi[i] }
        };
        variables.push(Variable { name: format!("v{i}"), domain, implied_integer: false });
    }

    let mut rows = Vec::with_capacity(model_rows);
    for i in 0..model_rows {
        let rel = match con_cones[i] {
            Cone::Zero => Relation::Eq,
            Cone::NonPos => Relation::Le,
            Cone::NonNeg => Relation::Ge,
            Cone::Free => continue,
        };
        let name = meta.rows.get(&i).cloned().unwrap_or_else(|| format!("r{i}"));
        let rhs = if row_const[i] == 0.0 { 0.0 } else { -row_const[i] };
        rows.push(LinearRow { name, terms: std::mem::take(&mut row_terms[i]), rel, rhs });
    }

    let mut pencils: Vec<MatrixPencil> = psd_orders
        .iter()
        .enumerate()
        .map(|(k, &order)| MatrixPencil {
            name: meta.pencils.get(&k).cloned().unwrap_or_else(|| format!("psd{k}")),
            order,
            constant: CoefMatrix::default(),
            terms: Vec::new(),
        })
        .collect();
    let mirror = |m: &mut CoefMatrix, r: usize, c: usize, v: f64| {
        m.entries.push((r, c, v));
        if r != c {
            m.entries.push((c, r, v));
        }
    };
    for &(k, j, r, c, v) in &hcoord {
        let p = &mut pencils[k];
        let slot = match p.terms.iter().position(|(var, _)| *var == j) {
            Some(s) => s,
            None => {
                p.terms.push((j, CoefMatrix::default()));
                p.terms.len() - 1
            }
        };
        mirror(&mut p.terms[slot].1, r, c, v);
    }
    for &(k, r, c, v) in &dcoord {
        mirror(&mut pencils[k].constant, r, c, v);
    }

    let sign = match sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };
    let constant = meta.objconst.unwrap_or(0.0) + obj_const;
    let mut model = MisdpModel {
        provenance: meta.provenance.unwrap_or_default(),
        variables,
        objective: Objective {
            sense,
            terms: obj.into_iter().map(|(j, v)| (j, sign * v)).collect(),
            constant: if constant == 0.0 { 0.0 } else { sign * constant },
        },
        rows,
        pencils,
    };
    model.canonicalize();
    Ok(model)
}

fn tokens(line: usize, l: &str, count: usize) -> Result<Vec<&str>, ModelError> {
    let t: Vec<&str> = l.split_whitespace().collect();
    if t.len() != count {
        return Err(perr(line, format!("expected {count} fields, found {}", t.len())));
    }
    Ok(t)
}

fn uint(line: usize, t: &str) -> Result<usize, ModelError> {
    t.parse().map_err(|_| perr(line, format!("bad index `{t}`")))
}

fn float(line: usize, t: &str) -> Result<f64, ModelError> {
    t.parse().map_err(|_| perr(line, format!("bad number `{t}`")))
}

fn pair(line: usize, l: &str) -> Result<(usize, f64), ModelError> {
    let t = tokens(line, l, 2)?;
    Ok((uint(line, t[0])?, float(line, t[1])?))
}
