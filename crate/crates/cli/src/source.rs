//! Input resolution: files on disk or `builtin:<name>` assets, with sha256 digests.

use crate::report::{CliError, InputDigest};
use obstructa::builtins::{self, SyntheticConfig, SYNTHETIC_CONFIGS};
use obstructa::o3::Placement;
use obstructa::plgeom::{format_q, parse_q, Q};
use obstructa::simplicial::{ComplexJson, SimplicialComplex};
use obstructa::whitney::{fkt_datum, TowerDatum, WhitneyDatum};
use obstructa::Error;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Complex,
    Linking,
    Placement,
    Map,
    Whitney,
    Towers,
    Matrix,
    Direction,
    Report,
    Tree,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Complex => "complex",
            Kind::Linking => "linking",
            Kind::Placement => "placement",
            Kind::Map => "map",
            Kind::Whitney => "whitney",
            Kind::Towers => "towers",
            Kind::Matrix => "matrix",
            Kind::Direction => "direction",
            Kind::Report => "report",
            Kind::Tree => "tree",
        }
    }
}

/// Order-2 towers on the four triangles of wn_toy.
const WN_TOY_TOWERS: &str = r#"{"arity":4,"towers":[{"cells":[0,1,2,3],"points":[{"sign":1,"tree":[[1,2],3,4]},{"sign":1,"tree":[[1,3],2,4]},{"sign":-1,"tree":[[2,4],1,3]}]}]}"#;

/// Names accepted after `builtin:` for each kind.
pub fn builtin_names(kind: Kind) -> Vec<String> {
    match kind {
        Kind::Complex => builtins::COMPLEX_NAMES.iter().map(|s| s.to_string()).collect(),
        Kind::Linking => builtins::LINKING_NAMES.iter().map(|s| s.to_string()).collect(),
        Kind::Placement | Kind::Map => SYNTHETIC_CONFIGS.iter().map(|c| format!("synthetic_{}", c.name())).collect(),
        Kind::Whitney => vec!["fkt_w3".into()],
        Kind::Towers => vec!["wn_toy_towers".into()],
        Kind::Direction => vec!["synthetic_direction".into()],
        Kind::Matrix | Kind::Report | Kind::Tree => Vec::new(),
    }
}

fn synthetic(name: &str) -> obstructa::Result<Placement> {
    let cfg = name
        .strip_prefix("synthetic_")
        .ok_or_else(|| Error::validation(format!("unknown built-in placement {name:?}")))?;
    Ok(builtins::synthetic_placement(SyntheticConfig::from_name(cfg)?))
}

pub fn builtin_text(kind: Kind, name: &str) -> obstructa::Result<String> {
    let unknown = || Error::validation(format!("unknown built-in {} {name:?}; known: {:?}", kind.name(), builtin_names(kind)));
    let text = match kind {
        Kind::Complex => serde_json::to_string(&builtins::build_named_complex(name)?.to_json()).expect("complex serializes"),
        Kind::Linking => serde_json::to_string(&builtins::named_linking_form(name)?).expect("linking form serializes"),
        Kind::Placement => synthetic(name)?.to_json_string(),
        Kind::Map => synthetic(name)?.base.to_json_string(),
        Kind::Whitney if name == "fkt_w3" => fkt_datum(&builtins::k_fkt(), ["S", "Sp", "T"])?.to_json_string(),
        Kind::Towers if name == "wn_toy_towers" => WN_TOY_TOWERS.to_string(),
        Kind::Direction if name == "synthetic_direction" => {
            serde_json::to_string(&builtins::synthetic_direction().iter().map(format_q).collect::<Vec<_>>()).expect("vector serializes")
        }
        _ => return Err(unknown()),
    };
    Ok(text)
}

/// Loaded input text with its provenance label.
#[derive(Clone, Debug)]
pub struct Source {
    pub role: String,
    pub label: String,
    pub text: String,
}

impl Source {
    pub fn load(role: &str, spec: &str, kind: Kind) -> Result<Source, CliError> {
        let text = match spec.strip_prefix("builtin:") {
            Some(name) => builtin_text(kind, name).map_err(|e| CliError::new("load", e))?,
            None => std::fs::read_to_string(spec)
                .map_err(|e| CliError::new("load", Error::validation(format!("cannot read {spec}: {e}"))))?,
        };
        Ok(Source { role: role.to_string(), label: spec.to_string(), text })
    }

    /// Inline value given on the command line, such as a comma-separated vector.
    pub fn inline(role: &str, text: &str) -> Source {
        Source { role: role.to_string(), label: format!("inline:{text}"), text: text.to_string() }
    }

    pub fn digest(&self) -> InputDigest {
        InputDigest { role: self.role.clone(), source: self.label.clone(), sha256: hex::encode(Sha256::digest(self.text.as_bytes())) }
    }
}

fn stage<T>(r: obstructa::Result<T>, stage: &str) -> Result<T, CliError> {
    r.map_err(|e| CliError::new(stage, e))
}

pub fn parse_complex(text: &str) -> obstructa::Result<SimplicialComplex> {
    let j: ComplexJson = serde_json::from_str(text).map_err(|e| Error::validation(format!("complex JSON: {e}")))?;
    SimplicialComplex::from_json(&j)
}

pub fn parse_linking(text: &str) -> obstructa::Result<builtins::LinkingForm> {
    serde_json::from_str(text).map_err(|e| Error::validation(format!("linking form JSON: {e}")))
}

/// A rational vector as a JSON array or a comma-separated list.
pub fn parse_vector(text: &str) -> obstructa::Result<Vec<Q>> {
    let t = text.trim();
    if t.starts_with('[') {
        let raw: Vec<serde_json::Value> = serde_json::from_str(t).map_err(|e| Error::validation(format!("vector JSON: {e}")))?;
        raw.iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_q(s),
                serde_json::Value::Number(n) => parse_q(&n.to_string()),
                _ => Err(Error::validation(format!("bad vector entry {v}"))),
            })
            .collect()
    } else {
        t.split(',').map(parse_q).collect()
    }
}

pub fn parse_integers(text: &str) -> obstructa::Result<Vec<i64>> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| Error::validation(format!("bad integer {s:?}"))))
        .collect()
}

pub fn parse_tags<const N: usize>(text: &str) -> obstructa::Result<[String; N]> {
    let v: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    v.try_into().map_err(|v: Vec<String>| Error::validation(format!("expected {N} comma-separated tags, got {}", v.len())))
}

/// Loader collecting digests of everything read.
#[derive(Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    fn take(&mut self, role: &str, spec: &str, kind: Kind) -> Result<Source, CliError> {
        let s = Source::load(role, spec, kind)?;
        self.digests.push(s.digest());
        Ok(s)
    }

    pub fn complex(&mut self, spec: &str) -> Result<SimplicialComplex, CliError> {
        let s = self.take("complex", spec, Kind::Complex)?;
        stage(parse_complex(&s.text), "parse")
    }

    pub fn raw(&mut self, role: &str, spec: &str, kind: Kind) -> Result<String, CliError> {
        Ok(self.take(role, spec, kind)?.text)
    }

    pub fn linking(&mut self, spec: &str) -> Result<builtins::LinkingForm, CliError> {
        let s = self.take("linking", spec, Kind::Linking)?;
        stage(parse_linking(&s.text), "parse")
    }

    /// A placement file may also be a plain map.
    pub fn placement(&mut self, spec: &str) -> Result<Placement, CliError> {
        let s = self.take("placement", spec, Kind::Placement)?;
        stage(Placement::from_json_str(&s.text), "parse")
    }

    pub fn map(&mut self, spec: &str) -> Result<obstructa::plgeom::PLMap, CliError> {
        let s = self.take("map", spec, Kind::Map)?;
        stage(obstructa::plgeom::PLMap::from_json_str(&s.text), "parse")
    }

    pub fn whitney(&mut self, spec: &str) -> Result<WhitneyDatum, CliError> {
        let s = self.take("whitney", spec, Kind::Whitney)?;
        stage(WhitneyDatum::from_json_str(&s.text), "parse")
    }

    pub fn towers(&mut self, spec: &str) -> Result<TowerDatum, CliError> {
        let s = self.take("towers", spec, Kind::Towers)?;
        stage(TowerDatum::from_json_str(&s.text), "parse")
    }

    pub fn matrix(&mut self, spec: &str) -> Result<obstructa::zlinalg::SparseMatrix, CliError> {
        let s = self.take("matrix", spec, Kind::Matrix)?;
        stage(
            serde_json::from_str(&s.text).map_err(|e| Error::validation(format!("matrix JSON: {e}"))),
            "parse",
        )
    }

    /// `builtin:` name, existing file, or an inline comma-separated vector.
    pub fn direction(&mut self, spec: &str) -> Result<Vec<Q>, CliError> {
        let s = if spec.starts_with("builtin:") || std::path::Path::new(spec).is_file() {
            self.take("direction", spec, Kind::Direction)?
        } else {
            let s = Source::inline("direction", spec);
            self.digests.push(s.digest());
            s
        };
        stage(parse_vector(&s.text), "parse")
    }

    pub fn inline(&mut self, role: &str, text: &str) {
        self.digests.push(Source::inline(role, text).digest());
    }
}

/// Parses `text` as `kind`; where a writer exists, checks that write-then-parse is a fixed point.
/// Used by the fuzz targets and their seed test. Panics only on a round-trip mismatch.
pub fn decode(kind: Kind, text: &str) -> obstructa::Result<()> {
    fn fixed_point<T>(text: &str, parse: impl Fn(&str) -> obstructa::Result<T>, write: impl Fn(&T) -> String) -> obstructa::Result<()> {
        let once = write(&parse(text)?);
        let twice = write(&parse(&once).unwrap_or_else(|e| panic!("re-parse of {once} failed: {e}")));
        assert_eq!(once, twice, "round trip is not stable");
        Ok(())
    }
    let json_err = |e: serde_json::Error| Error::validation(e.to_string());
    match kind {
        Kind::Complex => fixed_point(text, parse_complex, |c| serde_json::to_string(&c.to_json()).expect("complex serializes")),
        Kind::Linking => fixed_point(text, parse_linking, |l| serde_json::to_string(l).expect("linking serializes")),
        Kind::Placement => fixed_point(text, Placement::from_json_str, |p| p.to_json_string()),
        Kind::Map => fixed_point(text, obstructa::plgeom::PLMap::from_json_str, |m| m.to_json_string()),
        Kind::Whitney => fixed_point(text, WhitneyDatum::from_json_str, |w| w.to_json_string()),
        Kind::Towers => TowerDatum::from_json_str(text).map(|_| ()),
        Kind::Matrix => fixed_point(
            text,
            |t| serde_json::from_str::<obstructa::zlinalg::SparseMatrix>(t).map_err(json_err),
            |m| serde_json::to_string(m).expect("matrix serializes"),
        ),
        Kind::Direction => fixed_point(text, parse_vector, |v| v.iter().map(format_q).collect::<Vec<_>>().join(",")),
        Kind::Report => fixed_point(
            text,
            |t| serde_json::from_str::<crate::report::Report>(t).map_err(json_err),
            |r| r.to_json_line(),
        ),
        Kind::Tree => {
            let v: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
            obstructa::trees::Tree::from_json(&v).map(|_| ())
        }
    }
}
