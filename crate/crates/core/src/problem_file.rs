//! Flat `key = value` problem files.
//!
//! ```text
//! # Helmholtz equation on [-pi, pi]^2
//! name     = helmholtz
//! domain   = -pi, pi, -pi, pi        # x1, x2, y1, y2
//! operator = helmholtz               # laplacian | helmholtz | biharmonic | custom
//! lambda   = 1                       # helmholtz only
//! source   = x
//! exact    = sin(x) + sin(y) + x     # optional
//! boundary = dirichlet               # homogeneous | dirichlet | biharmonic-1 | biharmonic-2
//! value    = sin(x) + sin(y) + x     # u on every edge; value.left etc. override one edge
//! ```
//!
//! `operator = custom` takes one or more `term = p q <coefficient>` lines.
//! Biharmonic regimes also need `normal` (type 2, `∂u/∂n`) or
//! `second_normal` (type 1, `∂²u/∂n²`) data, with the same per-edge overrides.

use std::collections::HashMap;
use std::path::Path;

use crate::basis::Interval;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::problem::{BoundarySpec, Edge, EdgeData, EllipticProblem, Field, LinearOperator, OperatorTerm};

impl From<Expr> for Field {
    fn from(e: Expr) -> Self {
        match e.constant_value() {
            Some(c) => Field::from(c),
            None => Field::function(move |x, y| e.eval(x, y)),
        }
    }
}

struct Entry {
    line: usize,
    value: String,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn expr_at(entry: &Entry) -> Result<Expr> {
    Expr::parse(&entry.value).map_err(|e| parse_error(entry.line, format!("{e} in `{}`", entry.value)))
}

fn constant_at(entry: &Entry, text: &str) -> Result<f64> {
    let e = Expr::parse(text).map_err(|e| parse_error(entry.line, e.to_string()))?;
    e.constant_value()
        .ok_or_else(|| parse_error(entry.line, format!("`{text}` must be a constant")))
}

const KNOWN_KEYS: &[&str] = &[
    "name",
    "domain",
    "operator",
    "lambda",
    "term",
    "source",
    "exact",
    "boundary",
    "value",
    "normal",
    "second_normal",
];

pub fn load(path: &Path) -> Result<EllipticProblem> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<EllipticProblem> {
    let mut entries: HashMap<String, Entry> = HashMap::new();
    let mut terms: Vec<Entry> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(parse_error(line, format!("expected `key = value`, got `{content}`")));
        };
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim().to_string();
        let base = key.split('.').next().unwrap_or("");
        if !KNOWN_KEYS.contains(&base) {
            return Err(parse_error(line, format!("unknown key `{key}`")));
        }
        if let Some(edge) = key.split_once('.').map(|(_, e)| e) {
            if !matches!(base, "value" | "normal" | "second_normal") {
                return Err(parse_error(line, format!("key `{base}` has no per-edge form")));
            }
            if edge_from_name(edge).is_none() {
                return Err(parse_error(
                    line,
                    format!("unknown edge `{edge}` (left, right, bottom, top)"),
                ));
            }
        }
        if value.is_empty() {
            return Err(parse_error(line, format!("empty value for `{key}`")));
        }
        let entry = Entry { line, value };
        if key == "term" {
            terms.push(entry);
        } else if let Some(prev) = entries.insert(key.clone(), entry) {
            return Err(parse_error(
                line,
                format!("duplicate key `{key}` (first on line {})", prev.line),
            ));
        }
    }

    let required = |key: &str| -> Result<&Entry> {
        entries
            .get(key)
            .ok_or_else(|| parse_error(last_line.max(1), format!("missing required key `{key}`")))
    };

    let name = entries
        .get("name")
        .map(|e| e.value.clone())
        .unwrap_or_else(|| "custom".to_string());

    let domain_entry = required("domain")?;
    let parts: Vec<&str> = domain_entry.value.split(',').collect();
    if parts.len() != 4 {
        return Err(parse_error(
            domain_entry.line,
            "domain needs four values: x1, x2, y1, y2",
        ));
    }
    let bounds: Vec<f64> = parts
        .iter()
        .map(|p| constant_at(domain_entry, p.trim()))
        .collect::<Result<_>>()?;
    let ix = Interval::new(bounds[0], bounds[1]).map_err(|e| parse_error(domain_entry.line, e.to_string()))?;
    let iy = Interval::new(bounds[2], bounds[3]).map_err(|e| parse_error(domain_entry.line, e.to_string()))?;

    let op_entry = required("operator")?;
    let operator = match op_entry.value.to_ascii_lowercase().as_str() {
        "laplacian" => LinearOperator::laplacian(),
        "biharmonic" => LinearOperator::biharmonic(),
        "helmholtz" => {
            let lambda_entry = required("lambda")?;
            LinearOperator::helmholtz(constant_at(lambda_entry, &lambda_entry.value)?)
        }
        "custom" => {
            if terms.is_empty() {
                return Err(parse_error(
                    op_entry.line,
                    "custom operator needs at least one `term = p q coefficient` line",
                ));
            }
            let parsed = terms.iter().map(parse_term).collect::<Result<Vec<_>>>()?;
            LinearOperator::new(parsed).map_err(|e| parse_error(op_entry.line, e.to_string()))?
        }
        other => {
            return Err(parse_error(
                op_entry.line,
                format!("unknown operator `{other}` (laplacian, helmholtz, biharmonic, custom)"),
            ))
        }
    };
    if !op_entry.value.eq_ignore_ascii_case("custom") {
        if let Some(t) = terms.first() {
            return Err(parse_error(t.line, "`term` lines require `operator = custom`"));
        }
    }

    let source = Field::from(expr_at(required("source")?)?);
    let exact = entries.get("exact").map(expr_at).transpose()?.map(Field::from);

    let edge_data = |key: &str| -> Result<EdgeData> {
        let shared = entries.get(key).map(expr_at).transpose()?;
        let mut data = EdgeData::zero();
        for edge in Edge::ALL {
            let specific = entries.get(&format!("{key}.{}", edge.name()));
            let field = match (specific, &shared) {
                (Some(e), _) => Field::from(expr_at(e)?),
                (None, Some(s)) => Field::from(s.clone()),
                (None, None) => {
                    return Err(parse_error(
                        last_line.max(1),
                        format!(
                            "missing `{key}` data for the {} edge (set `{key}` or `{key}.{}`)",
                            edge.name(),
                            edge.name()
                        ),
                    ))
                }
            };
            *data.edge_mut(edge) = field;
        }
        Ok(data)
    };

    let bc_entry = required("boundary")?;
    let boundary = match bc_entry.value.to_ascii_lowercase().as_str() {
        "homogeneous" => BoundarySpec::HomogeneousDirichlet,
        "dirichlet" => BoundarySpec::Dirichlet(edge_data("value")?),
        "biharmonic-1" => BoundarySpec::BiharmonicTypeI {
            value: edge_data("value")?,
            second_normal: edge_data("second_normal")?,
        },
        "biharmonic-2" => BoundarySpec::BiharmonicTypeII {
            value: edge_data("value")?,
            normal: edge_data("normal")?,
        },
        other => {
            return Err(parse_error(
                bc_entry.line,
                format!("unknown boundary regime `{other}` (homogeneous, dirichlet, biharmonic-1, biharmonic-2)"),
            ))
        }
    };

    let problem = EllipticProblem {
        name,
        domain: (ix, iy),
        operator,
        source,
        boundary,
        exact,
    };
    problem
        .validate()
        .map_err(|e| parse_error(bc_entry.line, e.to_string()))?;
    Ok(problem)
}

fn parse_term(entry: &Entry) -> Result<OperatorTerm> {
    let mut it = entry.value.splitn(3, char::is_whitespace);
    let mut order = |what: &str| -> Result<usize> {
        it.next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| parse_error(entry.line, format!("term is missing its {what} order")))?
            .parse::<usize>()
            .map_err(|_| parse_error(entry.line, format!("term {what} order must be a non-negative integer")))
    };
    let p = order("x")?;
    let q = order("y")?;
    let coef = it
        .next()
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| parse_error(entry.line, "term is missing its coefficient"))?;
    let expr = Expr::parse(coef).map_err(|e| parse_error(entry.line, e.to_string()))?;
    Ok(OperatorTerm::new(p, q, Field::from(expr)))
}

fn edge_from_name(name: &str) -> Option<Edge> {
    Edge::ALL.into_iter().find(|e| e.name() == name)
}
