//! Parsing of command-line values and input files.

use std::path::Path;

use num_rational::BigRational;
use num_traits::Signed;

use quiver_dt::json::parse_rational;
use quiver_dt::quiver::{Covector, DimVec, QuiverFile, SkewForm};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error("{what} has {got} entries, the quiver has {expected} vertices")]
    Length {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid quiver: {0}")]
    Quiver(String),
}

impl InputError {
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Io(..) => "Io",
            InputError::Malformed { .. } => "Malformed",
            InputError::Length { .. } => "DimensionMismatch",
            InputError::Quiver(_) => "Quiver",
        }
    }
}

pub fn read_file(p: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(p).map_err(|e| InputError::Io(p.display().to_string(), e.to_string()))
}

pub fn read_quiver(p: &Path) -> Result<SkewForm, InputError> {
    let text = read_file(p)?;
    QuiverFile::parse(&text)
        .and_then(|q| q.skew_form())
        .map_err(|e| InputError::Quiver(e.to_string()))
}

pub fn parse_vector(s: &str, d: usize) -> Result<DimVec, InputError> {
    let entries = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| InputError::Malformed {
            what: "dimension vector",
            detail: format!("{s:?}: {e}"),
        })?;
    if entries.len() != d {
        return Err(InputError::Length {
            what: "dimension vector",
            expected: d,
            got: entries.len(),
        });
    }
    Ok(DimVec::new(entries))
}

pub fn parse_parts(s: &str, d: usize) -> Result<Vec<DimVec>, InputError> {
    if s.trim().is_empty() {
        return Err(InputError::Malformed {
            what: "parts",
            detail: "no parts given".into(),
        });
    }
    s.split(';').map(|p| parse_vector(p, d)).collect()
}

pub fn parse_theta(s: &str, d: usize) -> Result<Covector, InputError> {
    let entries = s
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| InputError::Malformed {
            what: "theta",
            detail: e.to_string(),
        })?;
    if entries.len() != d {
        return Err(InputError::Length {
            what: "theta",
            expected: d,
            got: entries.len(),
        });
    }
    Ok(Covector(entries))
}

pub fn parse_scale(s: &str) -> Result<BigRational, InputError> {
    let q = parse_rational(s).map_err(|e| InputError::Malformed {
        what: "scale",
        detail: e.to_string(),
    })?;
    if !q.is_positive() {
        return Err(InputError::Malformed {
            what: "scale",
            detail: format!("{s:?} is not positive"),
        });
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts_and_theta() {
        let p = parse_parts("1,0; 0,1;0,1", 2).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[1], DimVec::new(vec![0, 1]));
        assert!(parse_parts("1,0;0", 2).is_err());
        assert!(parse_parts("1,x", 2).is_err());
        assert!(parse_parts("", 2).is_err());
        let t = parse_theta("1/2,-1/2", 2).unwrap();
        assert_eq!(t.entries()[0], BigRational::new(1.into(), 2.into()));
        assert!(parse_theta("1,2,3", 2).is_err());
        assert!(parse_scale("0").is_err());
        assert!(parse_scale("1/1024").is_ok());
    }
}
