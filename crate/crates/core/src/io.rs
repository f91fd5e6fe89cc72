//! File formats. Exact coefficients are written as integer or
//! "numerator/denominator" decimal strings so that every artifact
//! round-trips losslessly; plain JSON numbers are accepted on input and
//! converted exactly (every finite double is a dyadic rational).

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::density::IndexSet;
use crate::error::{Error, Result};
use crate::harmonic::MultiIndexPoly;
use crate::rational::{rational_from_f64, CRat};
use crate::series::EntireSeries;

/// An exact decimal string ("-3", "1/6") or a double.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumRepr {
    Exact(String),
    Float(f64),
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_from_string(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| Error::Format(format!("malformed integer '{t}'")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Format("zero denominator".into()));
            }
            if den.is_negative() {
                return Err(Error::Format("denominators must be positive".into()));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
    }
}

impl NumRepr {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            NumRepr::Exact(s) => rational_from_string(s),
            NumRepr::Float(x) => {
                if !x.is_finite() {
                    return Err(Error::Format(format!("non-finite coefficient {x}")));
                }
                Ok(rational_from_f64(*x))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesFile {
    kind: String,
    cap: usize,
    coeffs: Vec<[NumRepr; 2]>,
}

pub fn series_to_json(f: &EntireSeries) -> String {
    let file = SeriesFile {
        kind: "entire-series".into(),
        cap: f.cap(),
        coeffs: f
            .coeffs()
            .iter()
            .map(|c| {
                [
                    NumRepr::Exact(rational_to_string(&c.re)),
                    NumRepr::Exact(rational_to_string(&c.im)),
                ]
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("series serializes")
}

pub fn series_from_json(text: &str) -> Result<EntireSeries> {
    let file: SeriesFile = serde_json::from_str(text)?;
    if file.kind != "entire-series" {
        return Err(Error::Format(format!("expected entire-series, got '{}'", file.kind)));
    }
    if file.coeffs.len() != file.cap + 1 {
        return Err(Error::Format(format!(
            "cap {} does not match {} coefficients",
            file.cap,
            file.coeffs.len()
        )));
    }
    let coeffs = file
        .coeffs
        .iter()
        .map(|[re, im]| Ok(CRat::new(re.to_rational()?, im.to_rational()?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntireSeries::new(coeffs))
}

#[derive(Serialize, Deserialize)]
struct PolyTerm {
    alpha: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyFile {
    kind: String,
    dim: usize,
    /// graded-lexicographic term order: ascending total degree, then the
    /// lexicographically larger exponent vector first
    order: String,
    terms: Vec<PolyTerm>,
}

fn grlex_key(alpha: &[u32]) -> (u32, Vec<std::cmp::Reverse<u32>>) {
    (
        alpha.iter().sum(),
        alpha.iter().map(|&e| std::cmp::Reverse(e)).collect(),
    )
}

pub fn poly_to_json(p: &MultiIndexPoly) -> String {
    let mut terms: Vec<(&Vec<u32>, &BigRational)> = p.terms().collect();
    terms.sort_by_key(|(alpha, _)| grlex_key(alpha));
    let file = PolyFile {
        kind: "harmonic-poly".into(),
        dim: p.dim(),
        order: "grlex".into(),
        terms: terms
            .into_iter()
            .map(|(alpha, c)| PolyTerm {
                alpha: alpha.clone(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("polynomial serializes")
}

pub fn poly_from_json(text: &str) -> Result<MultiIndexPoly> {
    let file: PolyFile = serde_json::from_str(text)?;
    if file.kind != "harmonic-poly" {
        return Err(Error::Format(format!("expected harmonic-poly, got '{}'", file.kind)));
    }
    let mut p = MultiIndexPoly::zero(file.dim);
    for term in &file.terms {
        if term.alpha.len() != file.dim {
            return Err(Error::Format(format!(
                "term index length {} does not match dim {}",
                term.alpha.len(),
                file.dim
            )));
        }
        let num = term
            .num
            .parse::<BigInt>()
            .map_err(|_| Error::Format(format!("malformed numerator '{}'", term.num)))?;
        let den = term
            .den
            .parse::<BigInt>()
            .map_err(|_| Error::Format(format!("malformed denominator '{}'", term.den)))?;
        if den.is_zero() {
            return Err(Error::Format("zero denominator".into()));
        }
        p.add_term(&term.alpha, BigRational::new(num, den));
    }
    Ok(p)
}

#[derive(Serialize, Deserialize)]
struct IndexSetFile {
    kind: String,
    intervals: Vec<(u128, u128)>,
}

pub fn index_set_to_json(s: &IndexSet) -> String {
    let file = IndexSetFile { kind: "index-set".into(), intervals: s.intervals().to_vec() };
    serde_json::to_string_pretty(&file).expect("index set serializes")
}

pub fn index_set_from_json(text: &str) -> Result<IndexSet> {
    let file: IndexSetFile = serde_json::from_str(text)?;
    if file.kind != "index-set" {
        return Err(Error::Format(format!("expected index-set, got '{}'", file.kind)));
    }
    IndexSet::new(file.intervals)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}
