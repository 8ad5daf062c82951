//! File formats: JSON in, JSON out, rationals as `"p/q"` strings, never
//! floats. Serialization is deterministic (sorted keys and simplices), so
//! reports are byte-for-byte reproducible.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::cohomology::BettiTable;
use crate::complex::{Cover, Simplex, SimplicialComplex, StarOpen, VertexId};
use crate::error::Error;
use crate::forms::{AlgebroidForm, TermKey};
use crate::lie::LieAlgebra;
use crate::piecewise::PiecewiseForm;
use crate::poly::Monomial;
use crate::poly::Poly;
use crate::Rat;

fn parse_error(file: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_owned(),
        message: message.into(),
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let den = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if num::Zero::is_zero(&den) {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(num, den))
}

/// Formats a rational as `"p"` or `"p/q"` in lowest terms.
pub fn format_rat(r: &Rat) -> String {
    if num::One::is_one(r.denom()) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ComplexFile {
    vertices: Vec<String>,
    simplices: Vec<Vec<String>>,
}

/// Parses a complex file: listed simplices are generators, closure is
/// implied; listed vertices not in any simplex become isolated vertices.
pub fn parse_complex(text: &str, file: &str) -> Result<SimplicialComplex, Error> {
    let data: ComplexFile =
        serde_json::from_str(text).map_err(|e| parse_error(file, e.to_string()))?;
    let vertex_set: std::collections::BTreeSet<&String> = data.vertices.iter().collect();
    let mut generators = Vec::new();
    for names in &data.simplices {
        for n in names {
            if !vertex_set.contains(n) {
                return Err(parse_error(
                    file,
                    format!("simplex vertex {n:?} missing from the vertices list"),
                ));
            }
        }
        generators.push(
            Simplex::from_names(names)
                .map_err(|e| parse_error(file, e.to_string()))?,
        );
    }
    for v in &data.vertices {
        generators.push(
            Simplex::from_names(&[v.as_str()]).map_err(|e| parse_error(file, e.to_string()))?,
        );
    }
    Ok(SimplicialComplex::closure(&generators))
}

#[derive(Debug, Serialize, Deserialize)]
struct LieFile {
    dim: usize,
    brackets: Vec<(usize, usize, Vec<(usize, String)>)>,
}

/// Parses a Lie algebra file and validates the Jacobi identity.
pub fn parse_lie_algebra(text: &str, file: &str) -> Result<LieAlgebra, Error> {
    let data: LieFile =
        serde_json::from_str(text).map_err(|e| parse_error(file, e.to_string()))?;
    let mut brackets: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
    for (i, j, entries) in &data.brackets {
        if i >= j {
            return Err(parse_error(file, format!("bracket pair ({i},{j}) needs i<j")));
        }
        let mut coeffs = vec![Rat::from_integer(0.into()); data.dim];
        for (k, c) in entries {
            if *k >= data.dim {
                return Err(parse_error(file, format!("basis index {k} out of range")));
            }
            coeffs[*k] = parse_rat(c).map_err(|e| parse_error(file, e))?;
        }
        if brackets.insert((*i, *j), coeffs).is_some() {
            return Err(parse_error(file, format!("duplicate bracket pair ({i},{j})")));
        }
    }
    let algebra =
        LieAlgebra::new(data.dim, brackets).map_err(|e| parse_error(file, e.to_string()))?;
    algebra.validate()?;
    Ok(algebra)
}

#[derive(Debug, Serialize, Deserialize)]
struct TermRecord {
    simplex: Vec<String>,
    coeff: String,
    monomial: BTreeMap<String, u32>,
    dt: Vec<String>,
    dual: Vec<usize>,
}

/// Parses a piecewise form file (an array of per-simplex terms) over the
/// given base complex without checking compatibility; every structural
/// property (membership, degree homogeneity, free variables) is enforced.
pub fn parse_piecewise_raw(
    text: &str,
    file: &str,
    base: &SimplicialComplex,
) -> Result<PiecewiseForm, Error> {
    let records: Vec<TermRecord> =
        serde_json::from_str(text).map_err(|e| parse_error(file, e.to_string()))?;
    let degree = match records.first() {
        Some(r) => r.dt.len() + r.dual.len(),
        None => 0,
    };
    let mut components: BTreeMap<Simplex, AlgebroidForm> = BTreeMap::new();
    for r in &records {
        if r.dt.len() + r.dual.len() != degree {
            return Err(parse_error(file, "terms of mixed total degree"));
        }
        let simplex =
            Simplex::from_names(&r.simplex).map_err(|e| parse_error(file, e.to_string()))?;
        if !base.contains(&simplex) {
            return Err(parse_error(file, format!("{simplex} is not in the complex")));
        }
        let coeff = parse_rat(&r.coeff).map_err(|e| parse_error(file, e))?;
        let mono = Monomial::from_exponents(
            r.monomial
                .iter()
                .map(|(v, e)| (VertexId::new(v.clone()), *e))
                .collect(),
        );
        let mut dt: Vec<VertexId> = r.dt.iter().map(|v| VertexId::new(v.clone())).collect();
        dt.sort();
        dt.dedup();
        if dt.len() != r.dt.len() {
            return Err(parse_error(file, "repeated dt variable"));
        }
        let mut dual = r.dual.clone();
        dual.sort_unstable();
        dual.dedup();
        if dual.len() != r.dual.len() {
            return Err(parse_error(file, "repeated dual index"));
        }
        let key = TermKey { dt, dual };
        let mut term = BTreeMap::new();
        term.insert(key, Poly::monomial(mono, coeff));
        let addend = AlgebroidForm::from_terms(simplex.clone(), degree, term)
            .map_err(|e| parse_error(file, e.to_string()))?;
        let merged = match components.remove(&simplex) {
            Some(existing) => existing.add(&addend).expect("same simplex and degree"),
            None => addend,
        };
        components.insert(simplex, merged);
    }
    PiecewiseForm::from_components(base.clone(), degree, components)
}

/// Parses a piecewise form and checks the compatibility law; loading an
/// incompatible family is an error.
pub fn parse_piecewise(
    text: &str,
    file: &str,
    base: &SimplicialComplex,
) -> Result<PiecewiseForm, Error> {
    let form = parse_piecewise_raw(text, file, base)?;
    form.validate()?;
    Ok(form)
}

/// Serializes a piecewise form as a deterministic array of term records.
pub fn serialize_piecewise(form: &PiecewiseForm) -> String {
    let mut records = Vec::new();
    for (s, local) in form.components() {
        for (key, poly) in local.terms() {
            for (m, c) in poly.terms() {
                records.push(TermRecord {
                    simplex: s.vertices().iter().map(|v| v.name().to_owned()).collect(),
                    coeff: format_rat(c),
                    monomial: m
                        .exponents()
                        .iter()
                        .map(|(v, e)| (v.name().to_owned(), *e))
                        .collect(),
                    dt: key.dt.iter().map(|v| v.name().to_owned()).collect(),
                    dual: key.dual.clone(),
                });
            }
        }
    }
    serde_json::to_string_pretty(&records).expect("serializable records")
}

#[derive(Debug, Serialize, Deserialize)]
struct CoverFile {
    cover: Vec<Vec<String>>,
}

/// Parses a cover file: a list of star centers given by vertex names.
pub fn parse_cover(text: &str, file: &str, base: &SimplicialComplex) -> Result<Cover, Error> {
    let data: CoverFile =
        serde_json::from_str(text).map_err(|e| parse_error(file, e.to_string()))?;
    let mut members = Vec::new();
    for names in &data.cover {
        let center =
            Simplex::from_names(names).map_err(|e| parse_error(file, e.to_string()))?;
        if !base.contains(&center) {
            return Err(parse_error(file, format!("cover center {center} is not in the complex")));
        }
        members.push(StarOpen::new(center));
    }
    if members.is_empty() {
        return Err(parse_error(file, "empty cover"));
    }
    Ok(Cover::new(members))
}

#[derive(Debug, Serialize)]
struct BettiBlockReport {
    p: usize,
    w: u32,
    dim: usize,
    rank: usize,
}

#[derive(Debug, Serialize)]
struct BettiReport {
    betti: Vec<usize>,
    weights_used: u32,
    stabilized: bool,
    blocks: Vec<BettiBlockReport>,
}

/// Renders the Betti report in the documented JSON shape.
pub fn serialize_betti(table: &BettiTable) -> String {
    let report = BettiReport {
        betti: table.betti.clone(),
        weights_used: table.weights_used,
        stabilized: table.stabilized,
        blocks: table
            .blocks
            .iter()
            .map(|b| BettiBlockReport {
                p: b.p,
                w: b.w,
                dim: b.dim,
                rank: b.rank,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&report).expect("serializable report")
}
