//! Plain-text model dump. Reals are written with 17 significant digits so
//! that reading a dump back reproduces every bit.
//!
//! ```text
//! steelcast-svm 1
//! type svr
//! kernel rbf 2.0000000000000000e0
//! c 1.5000000000000000e0
//! epsilon 1.0000000000000001e-1
//! bias -3.2000000000000001e-2
//! dim 2
//! sv 3 4.0000000000000002e-1 1.0000000000000000e0 -2.5000000000000000e-1
//! ```
//!
//! Each `sv` row holds the training index, the dual coefficient and the
//! support vector.

use std::fmt::Write as _;

use super::{Kernel, KernelExpansion, SvcModel, SvrModel};
use crate::error::{Error, Result};

const MAGIC: &str = "steelcast-svm 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Svc,
    Svr,
}

/// A model read back from a dump.
#[derive(Debug, Clone, PartialEq)]
pub enum DumpedModel {
    Svc(SvcModel),
    Svr(SvrModel),
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_expansion(out: &mut String, kind: &str, e: &KernelExpansion, c: f64, epsilon: f64) {
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "type {kind}");
    match e.kernel {
        Kernel::Linear => {
            let _ = writeln!(out, "kernel linear");
        }
        Kernel::Rbf { sigma_squared } => {
            let _ = writeln!(out, "kernel rbf {}", real(sigma_squared));
        }
    }
    let _ = writeln!(out, "c {}", real(c));
    let _ = writeln!(out, "epsilon {}", real(epsilon));
    let _ = writeln!(out, "bias {}", real(e.bias));
    let _ = writeln!(out, "dim {}", e.dim);
    for ((i, a), sv) in e
        .support_indices
        .iter()
        .zip(&e.dual_coefficients)
        .zip(&e.support_vectors)
    {
        let _ = write!(out, "sv {i} {}", real(*a));
        for v in sv {
            let _ = write!(out, " {}", real(*v));
        }
        out.push('\n');
    }
}

pub fn write_model(model: &DumpedModel) -> String {
    let mut out = String::new();
    match model {
        DumpedModel::Svc(m) => write_expansion(&mut out, "svc", &m.expansion, m.c, 0.0),
        DumpedModel::Svr(m) => write_expansion(&mut out, "svr", &m.expansion, m.c, m.epsilon),
    }
    out
}

fn parse_real(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|e| Error::Schema(format!("model dump line {line}: `{s}`: {e}")))
}

fn field<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> Result<(usize, Vec<&'a str>)> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| Error::Schema(format!("model dump ends before `{key}`")))?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(key) {
        return Err(Error::Schema(format!(
            "model dump line {no}: expected `{key}`"
        )));
    }
    Ok((no, parts.collect()))
}

pub fn read_model(text: &str) -> Result<DumpedModel> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => return Err(Error::Schema("not a steelcast model dump".into())),
    }
    let (no, kind) = field(&mut lines, "type")?;
    let kind = match kind.as_slice() {
        ["svc"] => ModelKind::Svc,
        ["svr"] => ModelKind::Svr,
        _ => return Err(Error::Schema(format!("model dump line {no}: bad type"))),
    };
    let (no, k) = field(&mut lines, "kernel")?;
    let kernel = match k.as_slice() {
        ["linear"] => Kernel::Linear,
        ["rbf", s] => Kernel::rbf(parse_real(s, no)?)?,
        _ => return Err(Error::Schema(format!("model dump line {no}: bad kernel"))),
    };
    let mut scalar = |key: &str| -> Result<f64> {
        let (no, v) = field(&mut lines, key)?;
        match v.as_slice() {
            [s] => parse_real(s, no),
            _ => Err(Error::Schema(format!("model dump line {no}: bad `{key}`"))),
        }
    };
    let c = scalar("c")?;
    let epsilon = scalar("epsilon")?;
    let bias = scalar("bias")?;
    let dim = scalar("dim")? as usize;

    let mut e = KernelExpansion {
        kernel,
        support_vectors: Vec::new(),
        support_indices: Vec::new(),
        dual_coefficients: Vec::new(),
        bias,
        dim,
    };
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.first() != Some(&"sv") || parts.len() != dim + 3 {
            return Err(Error::Schema(format!(
                "model dump line {no}: bad support vector row"
            )));
        }
        let index = parts[1]
            .parse::<usize>()
            .map_err(|e| Error::Schema(format!("model dump line {no}: {e}")))?;
        e.support_indices.push(index);
        e.dual_coefficients.push(parse_real(parts[2], no)?);
        e.support_vectors.push(
            parts[3..]
                .iter()
                .map(|s| parse_real(s, no))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(match kind {
        ModelKind::Svc => DumpedModel::Svc(SvcModel {
            expansion: e,
            c,
            updates: 0,
        }),
        ModelKind::Svr => DumpedModel::Svr(SvrModel {
            expansion: e,
            c,
            epsilon,
            updates: 0,
        }),
    })
}
