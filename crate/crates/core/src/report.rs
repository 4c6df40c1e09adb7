//! Text reports and CSV emission.
//!
//! Reports print floats in shortest round-trip form. CSV cells use a fixed
//! 12-significant-digit format so identical inputs give identical bytes.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::normalform::NormalFormResult;
use crate::simulator::PeriodDiagnostics;
use crate::spectral::{ConditionReport, CurveScan, HopfPoint, Verdict};

pub const CURVE_HEADER: &str = "d21,n,tau_n0";
pub const CROSSING_HEADER: &str = "d21,tau,n_a,n_b";
pub const NORMAL_FORM_HEADER: &str = "n_c,omega_nc,tau_c,K1,K2,class";

/// Shortest representation that parses back to the same `f64`.
pub fn shortest(x: f64) -> String {
    format!("{x:?}")
}

/// Twelve significant digits, positional for moderate magnitudes and
/// scientific otherwise.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        sci
    }
}

/// A single `[section]` block of `key = value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    pub section: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(section: impl Into<String>) -> Self {
        Record {
            section: section.into(),
            fields: Vec::new(),
        }
    }

    pub fn text(mut self, key: &str, value: impl Into<String>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn num(self, key: &str, value: f64) -> Self {
        self.text(key, shortest(value))
    }

    pub fn flag(self, key: &str, value: bool) -> Self {
        self.text(key, value.to_string())
    }

    pub fn render(&self) -> String {
        let mut s = format!("[{}]\n", self.section);
        for (k, v) in &self.fields {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

pub fn render(records: &[Record]) -> String {
    records
        .iter()
        .map(Record::render)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn conditions_record(r: &ConditionReport) -> Record {
    let mut rec = Record::new("conditions")
        .text("variant", r.variant.as_str())
        .flag("c0", r.c0)
        .num("c_star", r.c_star)
        .text("index_set", format!("{:?}", r.index_set));
    if let Some(t) = &r.thresholds {
        rec = rec
            .num("d21_star", t.d21_star)
            .text("d21_star_n", format!("{:?}", t.argmin));
        for (n, d) in &t.by_mode {
            rec = rec.num(&format!("d21_threshold.{n}"), *d);
        }
    }
    if let Some(g) = &r.gestation {
        rec = rec
            .num("b", g.b)
            .num("c", g.c)
            .num("disc", g.disc)
            .flag("case_c1", g.c1)
            .flag("case_c11", g.c11)
            .flag("case_c2", g.c2)
            .flag("case_c21", g.c21)
            .flag("case_c3", g.c3);
        if let Some(ns) = g.n_star {
            rec = rec.text("n_star", ns.to_string());
        }
    }
    rec
}

pub fn verdict_record(params_d21: f64, tau: f64, v: &Verdict) -> Record {
    let rec = Record::new("verdict")
        .num("d21", params_d21)
        .num("tau", tau);
    match v {
        Verdict::Stable => rec.text("verdict", "stable"),
        Verdict::Unstable => rec.text("verdict", "unstable"),
        Verdict::OnHopfCurve { n, j } => rec
            .text("verdict", "on-hopf-curve")
            .text("n", n.to_string())
            .text("j", j.to_string()),
    }
}

pub fn hopf_record(hp: &HopfPoint) -> Record {
    Record::new("hopf_point")
        .text("n_c", hp.n_c.to_string())
        .text("j", hp.j.to_string())
        .num("omega", hp.omega_nc)
        .num("tau_c", hp.tau_c)
        .num("omega_c", hp.omega_c)
        .num("transversality", hp.transversality)
}

pub fn normal_form_record(hp: &HopfPoint, nf: &NormalFormResult) -> Record {
    Record::new("normal_form")
        .text("n_c", hp.n_c.to_string())
        .num("omega", hp.omega_nc)
        .num("tau_c", hp.tau_c)
        .num("K1", nf.k1)
        .num("K2", nf.k2)
        .text("direction", nf.direction.as_str())
        .text("stability", nf.orbit_stability.as_str())
        .text("class", nf.class_label())
        .text("B1", complex(nf.b1))
        .text("B21", complex(nf.b21))
        .text("B22", complex(nf.b22))
        .text("B23", complex(nf.b23))
        .text("B24", complex(nf.b24))
}

/// `a+bi` with shortest round-trip parts.
fn complex(z: num_complex::Complex64) -> String {
    let sign = if z.im.is_sign_negative() { "-" } else { "+" };
    format!("{}{sign}{}i", shortest(z.re), shortest(z.im.abs()))
}

pub fn diagnostics_record(d: &PeriodDiagnostics) -> Record {
    let opt = |x: Option<f64>| x.map(shortest).unwrap_or_else(|| "none".into());
    Record::new("diagnostics")
        .flag("converged_to_steady", d.converged_to_steady)
        .num("final_distance", d.final_distance)
        .text(
            "amplitude_trend",
            d.amplitude_trend.map(|t| t.as_str()).unwrap_or("none"),
        )
        .text("amplitude_drift", opt(d.amplitude_drift))
        .text("period_estimate", opt(d.period_estimate))
        .num("spatial_inhomogeneity", d.spatial_inhomogeneity)
        .text("peaks", d.peaks.len().to_string())
        .flag("inconclusive", d.inconclusive)
}

pub fn write_curve_csv<W: Write>(scan: &CurveScan, mut w: W) -> io::Result<()> {
    writeln!(w, "{CURVE_HEADER}")?;
    for p in &scan.points {
        writeln!(w, "{},{},{}", sig12(p.d21), p.n, sig12(p.tau_n0))?;
    }
    Ok(())
}

pub fn write_crossing_csv<W: Write>(scan: &CurveScan, mut w: W) -> io::Result<()> {
    writeln!(w, "{CROSSING_HEADER}")?;
    for c in &scan.crossings {
        writeln!(w, "{},{},{},{}", sig12(c.d21), sig12(c.tau), c.n_a, c.n_b)?;
    }
    Ok(())
}

pub fn write_normal_form_csv<W: Write>(
    rows: &[(HopfPoint, NormalFormResult)],
    mut w: W,
) -> io::Result<()> {
    writeln!(w, "{NORMAL_FORM_HEADER}")?;
    for (hp, nf) in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            hp.n_c,
            sig12(hp.omega_nc),
            sig12(hp.tau_c),
            sig12(nf.k1),
            sig12(nf.k2),
            nf.class_label()
        )?;
    }
    Ok(())
}
