//! The datum file: one canonical JSON layout, versioned, holding a global
//! point, a single local place, a standalone numerology or a family of
//! global points.

use serde::{Deserialize, Serialize};

use wdparity_core::global::{GlobalPointDatum, Place, PlaceKind};
use wdparity_core::{
    CycloWeilField, DeRhamNumerology, HodgeTateData, Matrix, PstLocalDatum, Sign, SympPairing,
    WdRep,
};

pub const FORMAT: &str = "wdparity-datum";
pub const VERSION: u32 = 1;

/// A parse or validation failure, located by line and column for syntax
/// errors and by field path for semantic ones.
#[derive(Debug, thiserror::Error)]
pub enum DatumError {
    #[error("empty datum file")]
    Empty,
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("unsupported format version {found} (expected {VERSION})")]
    Version { found: u32 },
}

fn at(path: &str, message: impl ToString) -> DatumError {
    DatumError::Field {
        path: path.to_string(),
        message: message.to_string(),
    }
}

type Rows = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub format: String,
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<PointBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local: Option<PlaceBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerology: Option<NumerologyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<PointBlock>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointBlock {
    /// `[F:Q]`.
    pub degree: u32,
    pub r2: u32,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1f: Option<i64>,
    pub places: Vec<PlaceBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    pub conductor: u64,
    pub q: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepBlock {
    pub frobenius: Rows,
    pub monodromy: Rows,
    /// Explicit finite inertia image; trivial when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia: Option<Vec<Rows>>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub artm1: usize,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceBlock {
    pub label: String,
    pub field: FieldBlock,
    pub rep: RepBlock,
    pub gram: Rows,
    /// Declared ramification for a place away from `p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramified: Option<bool>,
    /// Present exactly for places above `p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panchishkin: Option<PanchishkinBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanchishkinBlock {
    /// Basis of the stable Lagrangian, `d × d/2`.
    pub lagrangian: Rows,
    pub ht: Vec<(i64, usize)>,
    pub ht_plus: Vec<(i64, usize)>,
    pub ht_minus: Vec<(i64, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_plus: Option<i8>,
    pub kdeg: usize,
    pub h0: usize,
    pub h0_t: usize,
    pub h0_dual: usize,
    pub h0_dual_t: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumerologyBlock {
    pub d: usize,
    pub kdeg: usize,
    pub ht: Vec<(i64, usize)>,
    pub h0: usize,
    pub h0_t: usize,
    pub h0_dual: usize,
    pub h0_dual_t: usize,
}

/// What a datum file describes, with every scalar resolved.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Parsed {
    Point(GlobalPointDatum),
    Local(Place),
    Numerology(DeRhamNumerology),
    Family(Vec<GlobalPointDatum>),
}

/// Parses and resolves datum text.
pub fn parse(text: &str) -> Result<Parsed, DatumError> {
    resolve(&parse_file(text)?)
}

/// Parses the JSON layer only.
pub fn parse_file(text: &str) -> Result<DatumFile, DatumError> {
    if text.trim().is_empty() {
        return Err(DatumError::Empty);
    }
    let file: DatumFile = serde_json::from_str(text).map_err(|e| DatumError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.format != FORMAT {
        return Err(at(
            "format",
            format!("expected `{FORMAT}`, found `{}`", file.format),
        ));
    }
    if file.version != VERSION {
        return Err(DatumError::Version {
            found: file.version,
        });
    }
    Ok(file)
}

/// Canonical text: two-space indented JSON in which arrays of scalars stay
/// on one line, with a trailing newline.
pub fn to_text(file: &DatumFile) -> String {
    let value = serde_json::to_value(file).expect("datum blocks serialize");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

fn is_flat(v: &serde_json::Value) -> bool {
    !matches!(
        v,
        serde_json::Value::Array(_) | serde_json::Value::Object(_)
    )
}

fn write_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_flat) => {
            let inner: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push_str(&format!("[{}]", inner.join(", ")));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

pub fn serialize(parsed: &Parsed) -> String {
    to_text(&unresolve(parsed))
}

pub fn resolve(file: &DatumFile) -> Result<Parsed, DatumError> {
    let present = [
        file.point.is_some(),
        file.local.is_some(),
        file.numerology.is_some(),
        file.family.is_some(),
    ];
    if present.iter().filter(|p| **p).count() != 1 {
        return Err(at(
            "(root)",
            "exactly one of `point`, `local`, `numerology`, `family` is required",
        ));
    }
    if let Some(p) = &file.point {
        return Ok(Parsed::Point(resolve_point(p, "point")?));
    }
    if let Some(l) = &file.local {
        return Ok(Parsed::Local(resolve_place(l, "local")?));
    }
    if let Some(n) = &file.numerology {
        return Ok(Parsed::Numerology(resolve_numerology(n, "numerology")?));
    }
    let members = file.family.as_deref().unwrap_or_default();
    members
        .iter()
        .enumerate()
        .map(|(i, m)| resolve_point(m, &format!("family[{i}]")))
        .collect::<Result<_, _>>()
        .map(Parsed::Family)
}

fn resolve_point(block: &PointBlock, path: &str) -> Result<GlobalPointDatum, DatumError> {
    let places = block
        .places
        .iter()
        .enumerate()
        .map(|(i, p)| resolve_place(p, &format!("{path}.places[{i}]")))
        .collect::<Result<_, _>>()?;
    Ok(GlobalPointDatum {
        degree: block.degree,
        r2: block.r2,
        dim: block.dim,
        places,
        h1f: block.h1f,
    })
}

fn matrix(field: &CycloWeilField, rows: &Rows, path: &str) -> Result<Matrix, DatumError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let mut entries = Vec::with_capacity(r * c);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(at(
                &format!("{path}[{i}]"),
                format!("row has {} entries, expected {c}", row.len()),
            ));
        }
        for (j, text) in row.iter().enumerate() {
            let value = field
                .parse_terms(text)
                .map_err(|e| at(&format!("{path}[{i}][{j}]"), e))?;
            entries.push(value);
        }
    }
    Matrix::from_scalars(field, r, c, entries).map_err(|e| at(path, e))
}

fn ht(pairs: &[(i64, usize)]) -> HodgeTateData {
    HodgeTateData::new(pairs.iter().copied())
}

fn resolve_place(block: &PlaceBlock, path: &str) -> Result<Place, DatumError> {
    let field = CycloWeilField::new(block.field.conductor, block.field.q)
        .map_err(|e| at(&format!("{path}.field"), e))?;
    let rep_path = format!("{path}.rep");
    let frob = matrix(
        &field,
        &block.rep.frobenius,
        &format!("{rep_path}.frobenius"),
    )?;
    let mono = matrix(
        &field,
        &block.rep.monodromy,
        &format!("{rep_path}.monodromy"),
    )?;
    let inertia = match &block.rep.inertia {
        Some(list) => list
            .iter()
            .enumerate()
            .map(|(i, g)| matrix(&field, g, &format!("{rep_path}.inertia[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![Matrix::identity(&field, frob.rows())],
    };
    let rep = WdRep::new(frob, mono, inertia, block.rep.artm1).map_err(|e| at(&rep_path, e))?;
    let gram = matrix(&field, &block.gram, &format!("{path}.gram"))?;
    let pairing = SympPairing::validate(rep, gram).map_err(|e| at(&format!("{path}.gram"), e))?;
    let kind = match &block.panchishkin {
        None => PlaceKind::Away {
            pairing,
            declared_ramified: block.ramified,
        },
        Some(pb) => {
            let ppath = format!("{path}.panchishkin");
            if block.ramified.is_some() {
                return Err(at(
                    &format!("{path}.ramified"),
                    "only places away from p declare ramification",
                ));
            }
            let lagrangian = matrix(&field, &pb.lagrangian, &format!("{ppath}.lagrangian"))?;
            let det_plus = match pb.det_plus {
                None => None,
                Some(v) => Some(Sign::from_i64(v as i64).ok_or_else(|| {
                    at(&format!("{ppath}.det_plus"), format!("{v} is not a sign"))
                })?),
            };
            let datum = PstLocalDatum::new(
                pairing,
                lagrangian,
                ht(&pb.ht),
                ht(&pb.ht_plus),
                ht(&pb.ht_minus),
                det_plus,
                pb.kdeg,
            )
            .map_err(|e| at(&ppath, e))?;
            let numerology = DeRhamNumerology::new(
                datum.pairing().dim(),
                pb.kdeg,
                ht(&pb.ht),
                pb.h0,
                pb.h0_t,
                pb.h0_dual,
                pb.h0_dual_t,
            )
            .map_err(|e| at(&ppath, e))?;
            PlaceKind::AboveP { datum, numerology }
        }
    };
    Ok(Place {
        label: block.label.clone(),
        kind,
    })
}

fn resolve_numerology(block: &NumerologyBlock, path: &str) -> Result<DeRhamNumerology, DatumError> {
    DeRhamNumerology::new(
        block.d,
        block.kdeg,
        ht(&block.ht),
        block.h0,
        block.h0_t,
        block.h0_dual,
        block.h0_dual_t,
    )
    .map_err(|e| at(path, e))
}

/// The file layout of a parsed object, with scalars in canonical form.
pub fn unresolve(parsed: &Parsed) -> DatumFile {
    let mut file = DatumFile {
        format: FORMAT.into(),
        version: VERSION,
        point: None,
        local: None,
        numerology: None,
        family: None,
    };
    match parsed {
        Parsed::Point(g) => file.point = Some(point_block(g)),
        Parsed::Local(p) => file.local = Some(place_block(p)),
        Parsed::Numerology(n) => file.numerology = Some(numerology_block(n)),
        Parsed::Family(members) => file.family = Some(members.iter().map(point_block).collect()),
    }
    file
}

fn point_block(g: &GlobalPointDatum) -> PointBlock {
    PointBlock {
        degree: g.degree,
        r2: g.r2,
        dim: g.dim,
        h1f: g.h1f,
        places: g.places.iter().map(place_block).collect(),
    }
}

fn pairs(h: &HodgeTateData) -> Vec<(i64, usize)> {
    h.iter().collect()
}

fn place_block(place: &Place) -> PlaceBlock {
    let pairing = match &place.kind {
        PlaceKind::Away { pairing, .. } => pairing,
        PlaceKind::AboveP { datum, .. } => datum.pairing(),
    };
    let rep = pairing.rep();
    let field = rep.field();
    let trivial = rep.inertia().len() == 1 && rep.inertia()[0].is_identity();
    let (ramified, panchishkin) = match &place.kind {
        PlaceKind::Away {
            declared_ramified, ..
        } => (*declared_ramified, None),
        PlaceKind::AboveP { datum, numerology } => (
            None,
            Some(PanchishkinBlock {
                lagrangian: datum.split().plus_basis().entry_strings(),
                ht: pairs(datum.ht()),
                ht_plus: pairs(datum.ht_plus()),
                ht_minus: pairs(datum.ht_minus()),
                det_plus: datum.det_plus().map(Sign::as_i8),
                kdeg: datum.kdeg(),
                h0: numerology.h0(),
                h0_t: numerology.h0_t(),
                h0_dual: numerology.h0_dual(),
                h0_dual_t: numerology.h0_dual_t(),
            }),
        ),
    };
    PlaceBlock {
        label: place.label.clone(),
        field: FieldBlock {
            conductor: field.conductor(),
            q: field.q(),
        },
        rep: RepBlock {
            frobenius: rep.frobenius().entry_strings(),
            monodromy: rep.monodromy().entry_strings(),
            inertia: (!trivial).then(|| rep.inertia().iter().map(Matrix::entry_strings).collect()),
            artm1: rep.artm1_index(),
        },
        gram: pairing.gram().entry_strings(),
        ramified,
        panchishkin,
    }
}

fn numerology_block(n: &DeRhamNumerology) -> NumerologyBlock {
    NumerologyBlock {
        d: n.d(),
        kdeg: n.kdeg(),
        ht: pairs(n.ht()),
        h0: n.h0(),
        h0_t: n.h0_t(),
        h0_dual: n.h0_dual(),
        h0_dual_t: n.h0_dual_t(),
    }
}
