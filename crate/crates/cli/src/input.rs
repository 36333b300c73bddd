use std::fs;
use std::io::Read;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use tropmap_core::compact::CompactifiedPoint;
use tropmap_core::moduli::moduli_point;
use tropmap_core::pl::MapRecord;
use tropmap_core::rational::{parse_rational, serde_rational, serde_rational_vec};
use tropmap_core::{
    Error, Extended, ModuliPoint, Rational, ReluNetwork, SlopeSequence, TropicalMap,
    TropicalPolynomial,
};

use crate::CliError;

pub fn read_source(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::io("<stdin>", e))?;
    } else {
        text =
            fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), e))?;
    }
    Ok(text)
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = read_source(path)?;
    serde_json::from_str(&text).map_err(CliError::json)
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(CliError::json)
}

pub fn parse_map(v: Value) -> Result<TropicalMap, CliError> {
    let record: MapRecord = from_value(v)?;
    Ok(TropicalMap::try_from(record)?)
}

#[derive(Deserialize)]
struct PointInput {
    slopes: Vec<i64>,
    #[serde(with = "serde_rational_vec")]
    gaps: Vec<Rational>,
    #[serde(default = "zero", with = "serde_rational")]
    position: Rational,
}

fn zero() -> Rational {
    tropmap_core::rational::int(0)
}

fn parse_point(v: Value) -> Result<ModuliPoint, CliError> {
    let p: PointInput = from_value(v)?;
    let seq = SlopeSequence::new(3, p.slopes)?;
    Ok(ModuliPoint::new(seq, p.gaps, p.position)?)
}

/// A moduli point given directly or an admissible map, whose point is taken.
pub enum PointSource {
    Point(ModuliPoint),
    Map(TropicalMap, ModuliPoint),
}

impl PointSource {
    pub fn point(&self) -> &ModuliPoint {
        match self {
            PointSource::Point(p) | PointSource::Map(_, p) => p,
        }
    }
}

pub fn parse_point_or_map(v: Value) -> Result<PointSource, CliError> {
    if v.get("breaks").is_some() {
        let m = parse_map(v)?;
        let p = moduli_point(&m)?;
        Ok(PointSource::Map(m, p))
    } else {
        Ok(PointSource::Point(parse_point(v)?))
    }
}

pub fn parse_compact(v: Value) -> Result<CompactifiedPoint, CliError> {
    from_value(v)
}

pub fn parse_network(v: Value) -> Result<ReluNetwork, CliError> {
    from_value(v)
}

fn split(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

pub fn rational_list<const N: usize>(list: &str) -> Result<[Rational; N], CliError> {
    let values = split(list)
        .map(parse_rational)
        .collect::<Result<Vec<_>, Error>>()?;
    let n = values.len();
    values
        .try_into()
        .map_err(|_| CliError::malformed("arity", format!("expected {N} values, found {n}")))
}

pub fn slope_list(list: &str) -> Result<Vec<i64>, CliError> {
    split(list)
        .map(|s| {
            s.parse::<i64>().map_err(|_| {
                CliError::malformed("malformed-slope", format!("`{s}` is not an integer"))
            })
        })
        .collect()
}

pub fn polynomial(list: &str) -> Result<TropicalPolynomial, CliError> {
    let coefficients = split(list)
        .map(|s| s.parse::<Extended>())
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(TropicalPolynomial::from_extended(coefficients)?)
}
