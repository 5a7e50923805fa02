//! Human-readable and JSON report rendering.

use std::fmt::Write;
use std::path::Path;

use grasspack::bounds::BoundReport;
use grasspack::certify::Certificate;
use grasspack::optimize::{PackConfig, PackResult};
use grasspack::FusionFrame;
use serde::Serialize;
use serde_json::{json, Value};

use crate::frame_file;

const DIGITS: usize = 12;

/// Formats `x` with `digits` significant digits, dropping trailing zeros.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.prec$e}", prec = digits - 1);
        match s.split_once('e') {
            Some((mant, e)) if mant.contains('.') => {
                format!("{}e{e}", mant.trim_end_matches('0').trim_end_matches('.'))
            }
            _ => s,
        }
    }
}

fn num(x: f64) -> String {
    fmt_sig(x, DIGITS)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "n/a".into())
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn bounds(r: &BoundReport) -> String {
    let mut s = String::new();
    writeln!(s, "bounds for n = {}, d = {}, c = {} over {}", r.n, r.d, r.c, r.field).unwrap();
    let rows = [
        ("welch", opt(r.welch)),
        ("simplex(chordal)", num(r.simplex_chordal)),
        ("simplex(gram)", num(r.simplex_gram)),
        ("eitff", num(r.eitff_spectral)),
        ("orthoplex(chordal)", opt(r.orthoplex_chordal)),
        ("orthoplex(gram)", opt(r.orthoplex_gram)),
        ("gerzon", r.gerzon.to_string()),
        ("traceless_dim", r.traceless_dim.to_string()),
    ];
    for (k, v) in rows {
        writeln!(s, "  {k:<20} {v}").unwrap();
    }
    for note in &r.notes {
        writeln!(s, "  note: {note}").unwrap();
    }
    s
}

pub fn certificate(f: &FusionFrame, c: &Certificate) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "certificate for n = {}, d = {}, c = {} over {} (tolerance {})",
        f.n(),
        f.d(),
        f.c(),
        f.field(),
        num(c.tolerance)
    )
    .unwrap();
    let rows = [
        ("tight", format!("{} (residual {})", flag(c.is_tight), num(c.tight_residual))),
        ("alpha", opt(c.alpha)),
        (
            "equichordal",
            format!("{} (beta {}, deviation {})", flag(c.is_equichordal), num(c.beta), num(c.equichordal_deviation)),
        ),
        (
            "equiisoclinic",
            format!(
                "{} (sigma^2 {}, deviation {})",
                flag(c.is_equiisoclinic),
                num(c.sigma_sq),
                num(c.equiisoclinic_deviation)
            ),
        ),
        ("ECTFF", flag(c.is_ectff).to_string()),
        ("EITFF", flag(c.is_eitff).to_string()),
        ("simplex_gap", num(c.simplex_gap)),
        ("eitff_gap", num(c.eitff_gap)),
        ("orthoplex_gap", opt(c.orthoplex_gap)),
    ];
    for (k, v) in rows {
        writeln!(s, "  {k:<14} {v}").unwrap();
    }
    s
}

#[derive(Debug, Serialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub principal_angles: Vec<f64>,
    pub chordal_distance_sq: f64,
    pub spectral_distance_sq: f64,
    pub geodesic_distance: f64,
}

pub fn pair(p: &PairReport) -> String {
    let angles: Vec<String> = p.principal_angles.iter().map(|&t| num(t)).collect();
    let mut s = String::new();
    writeln!(s, "subspaces {} and {}", p.i, p.j).unwrap();
    writeln!(s, "  principal angles     [{}]", angles.join(", ")).unwrap();
    writeln!(s, "  chordal distance^2   {}", num(p.chordal_distance_sq)).unwrap();
    writeln!(s, "  spectral distance^2  {}", num(p.spectral_distance_sq)).unwrap();
    writeln!(s, "  geodesic distance    {}", num(p.geodesic_distance)).unwrap();
    s
}

pub fn pack_json(r: &PackResult, cfg: &PackConfig) -> Value {
    json!({
        "criterion": cfg.criterion,
        "achieved": r.achieved,
        "bound": r.bound,
        "gap": r.gap,
        "iterations": r.iterations,
        "restart": r.restart,
        "certificate": r.certificate,
        "frame": frame_file::to_json(&r.frame),
    })
}

pub fn pack(r: &PackResult, cfg: &PackConfig, out: Option<&Path>) -> String {
    let f = &r.frame;
    let mut s = String::new();
    writeln!(
        s,
        "pack n = {}, d = {}, c = {} over {} ({:?}, {} restarts, seed {})",
        f.n(),
        f.d(),
        f.c(),
        f.field(),
        cfg.criterion,
        cfg.restarts,
        cfg.seed
    )
    .unwrap();
    writeln!(s, "  achieved    {}", num(r.achieved)).unwrap();
    writeln!(s, "  bound       {}", num(r.bound)).unwrap();
    writeln!(s, "  gap         {}", num(r.gap)).unwrap();
    writeln!(s, "  iterations  {} (restart {})", r.iterations, r.restart).unwrap();
    writeln!(
        s,
        "  certified   tight {}, ECTFF {}, EITFF {}",
        flag(r.certificate.is_tight),
        flag(r.certificate.is_ectff),
        flag(r.certificate.is_eitff)
    )
    .unwrap();
    if let Some(path) = out {
        writeln!(s, "  frame written to {}", path.display()).unwrap();
    }
    s
}
