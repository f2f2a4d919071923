//! Versioned `naxray/1` JSON documents for fields, sinograms and plans.
//!
//! Output is canonical: object keys are sorted and every float is written with
//! 17 significant digits, so equal inputs give byte-identical files.

use std::io;

use naxray_core::geometry::{format_rational, parse_rational, LatticePoint};
use naxray_core::{Complex64, GammaRPlan, LatticeField, Mat, Ray, Regime, Sinogram, SinogramMeta, TransformKind};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const FORMAT: &str = "naxray/1";

/// Matrix as rows of `[re, im]` pairs.
pub type MatDoc = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldDoc {
    pub format: String,
    pub d: usize,
    pub n: usize,
    pub r: f64,
    pub regime: String,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m_bound: Option<f64>,
    pub entries: Vec<FieldEntryDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldEntryDoc {
    pub z: Vec<i64>,
    pub m: MatDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SinogramDoc {
    pub format: String,
    pub meta: MetaDoc,
    pub rays: Vec<RayValueDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetaDoc {
    pub d: usize,
    pub n: usize,
    pub r: f64,
    pub transform_kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan_id: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RayDoc {
    pub base: Vec<String>,
    pub dir: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RayValueDoc {
    pub base: Vec<String>,
    pub dir: Vec<i64>,
    pub value: MatDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanDoc {
    pub format: String,
    pub r: f64,
    #[serde(rename = "M")]
    pub m_bound: f64,
    pub d: usize,
    pub entries: Vec<PlanEntryDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanEntryDoc {
    pub z: Vec<i64>,
    pub layer: usize,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub dir: Vec<i64>,
    pub chords: Vec<ChordDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChordDoc {
    pub cell: Vec<i64>,
    pub length: f64,
}

/// Pretty printer with fixed-precision floats.
struct Canonical<'a>(PrettyFormatter<'a>);

impl Formatter for Canonical<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Canonical text of any serializable document, newline-terminated.
pub fn to_canonical_string<T: Serialize>(doc: &T) -> CliResult<String> {
    // Going through `Value` sorts the keys.
    let value = serde_json::to_value(doc).map_err(|e| CliError::Format(e.to_string()))?;
    reject_non_finite(&value)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Canonical(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).map_err(|e| CliError::Format(e.to_string()))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

fn reject_non_finite(value: &Value) -> CliResult<()> {
    // serde_json turns NaN and infinities into null on the way in.
    match value {
        Value::Null => Err(CliError::Format("refusing to write a non-finite number".into())),
        Value::Array(items) => items.iter().try_for_each(reject_non_finite),
        Value::Object(map) => map.values().try_for_each(reject_non_finite),
        _ => Ok(()),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> CliResult<T> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Format(format!("{what}: {e}")))?;
    match value.get("format").and_then(Value::as_str) {
        Some(FORMAT) => {}
        Some(other) => return Err(CliError::Format(format!("{what}: unsupported format {other:?}"))),
        None => return Err(CliError::Format(format!("{what}: missing \"format\": \"{FORMAT}\""))),
    }
    serde_json::from_value(value).map_err(|e| CliError::Format(format!("{what}: {e}")))
}

pub fn mat_to_doc(m: &Mat) -> MatDoc {
    (0..m.n()).map(|i| (0..m.n()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect()).collect()
}

pub fn mat_from_doc(doc: &MatDoc) -> CliResult<Mat> {
    let n = doc.len();
    let mut data = Vec::with_capacity(n * n);
    for row in doc {
        if row.len() != n {
            return Err(CliError::Format(format!("matrix row of length {} in a {n}×{n} matrix", row.len())));
        }
        data.extend(row.iter().map(|[re, im]| Complex64::new(*re, *im)));
    }
    Ok(Mat::new(n, data)?)
}

fn rationals_to_doc(v: &[naxray_core::Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn rationals_from_doc(v: &[String]) -> CliResult<Vec<naxray_core::Rational>> {
    Ok(v.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?)
}

pub fn ray_to_doc(ray: &Ray) -> RayDoc {
    RayDoc { base: rationals_to_doc(ray.base()), dir: ray.dir().to_vec() }
}

pub fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::Multiplicative => "multiplicative",
        Regime::Additive => "additive",
    }
}

pub fn field_to_doc(field: &LatticeField) -> FieldDoc {
    FieldDoc {
        format: FORMAT.into(),
        d: field.d(),
        n: field.n(),
        r: field.r(),
        regime: regime_name(field.regime()).into(),
        m_bound: field.m_bound(),
        entries: field.iter().map(|(z, m)| FieldEntryDoc { z: z.0.clone(), m: mat_to_doc(m) }).collect(),
    }
}

pub fn field_from_doc(doc: &FieldDoc) -> CliResult<LatticeField> {
    let regime = match doc.regime.as_str() {
        "multiplicative" => Regime::Multiplicative,
        "additive" => Regime::Additive,
        other => return Err(CliError::Format(format!("unknown regime {other:?}"))),
    };
    let mut field = LatticeField::new(doc.d, doc.n, doc.r, regime)?;
    for e in &doc.entries {
        field.insert(LatticePoint(e.z.clone()), mat_from_doc(&e.m)?)?;
    }
    match doc.m_bound {
        Some(m) => Ok(field.with_bound(m)?),
        None => Ok(field),
    }
}

pub fn field_to_json(field: &LatticeField) -> CliResult<String> {
    to_canonical_string(&field_to_doc(field))
}

pub fn field_from_json(text: &str) -> CliResult<LatticeField> {
    field_from_doc(&parse(text, "field")?)
}

pub fn sinogram_to_json(sino: &Sinogram) -> CliResult<String> {
    let meta = sino.meta();
    let doc = SinogramDoc {
        format: FORMAT.into(),
        meta: MetaDoc {
            d: meta.d,
            n: meta.n,
            r: meta.r,
            transform_kind: meta.transform_kind.as_str().into(),
            plan_id: meta.plan_id.clone(),
        },
        rays: sino
            .iter()
            .map(|(ray, v)| RayValueDoc {
                base: rationals_to_doc(ray.base()),
                dir: ray.dir().to_vec(),
                value: mat_to_doc(v),
            })
            .collect(),
    };
    to_canonical_string(&doc)
}

pub fn sinogram_from_json(text: &str) -> CliResult<Sinogram> {
    let doc: SinogramDoc = parse(text, "sinogram")?;
    let transform_kind: TransformKind = doc.meta.transform_kind.parse()?;
    let meta = SinogramMeta { d: doc.meta.d, n: doc.meta.n, r: doc.meta.r, transform_kind, plan_id: doc.meta.plan_id };
    let mut sino = Sinogram::new(meta);
    for rv in &doc.rays {
        let ray = Ray::new(rationals_from_doc(&rv.base)?, rv.dir.clone())?;
        sino.insert(ray, mat_from_doc(&rv.value)?)?;
    }
    Ok(sino)
}

pub fn plan_to_doc(plan: &GammaRPlan) -> PlanDoc {
    PlanDoc {
        format: FORMAT.into(),
        r: plan.r,
        m_bound: plan.m_bound,
        d: plan.d,
        entries: plan
            .entries
            .iter()
            .map(|e| PlanEntryDoc {
                z: e.z.0.clone(),
                layer: e.layer,
                x: rationals_to_doc(&e.x),
                y: rationals_to_doc(&e.y),
                dir: e.ray.dir().to_vec(),
                chords: e.chords.iter().map(|c| ChordDoc { cell: c.cell.0.clone(), length: c.length }).collect(),
            })
            .collect(),
    }
}

pub fn plan_to_json(plan: &GammaRPlan) -> CliResult<String> {
    to_canonical_string(&plan_to_doc(plan))
}

/// Loads a plan and checks that the stored chords match the ones recomputed
/// from the exact geometry.
pub fn plan_from_json(text: &str) -> CliResult<GammaRPlan> {
    let doc: PlanDoc = parse(text, "plan")?;
    let mut records = Vec::with_capacity(doc.entries.len());
    for e in &doc.entries {
        records.push((
            LatticePoint(e.z.clone()),
            e.layer,
            rationals_from_doc(&e.x)?,
            rationals_from_doc(&e.y)?,
            e.dir.clone(),
        ));
    }
    let plan = GammaRPlan::from_records(doc.r, doc.m_bound, doc.d, records)?;
    for (e, stored) in plan.entries.iter().zip(&doc.entries) {
        let consistent = e.chords.len() == stored.chords.len()
            && e.chords
                .iter()
                .zip(&stored.chords)
                .all(|(c, s)| c.cell.0 == s.cell && (c.length - s.length).abs() <= 1e-12 * c.length.max(1.0));
        if !consistent {
            return Err(CliError::Format(format!("plan entry {} has chords inconsistent with its ray", e.z)));
        }
    }
    Ok(plan)
}

/// Hex SHA-256 of the canonical plan document.
pub fn plan_id(plan: &GammaRPlan) -> CliResult<String> {
    let text = plan_to_json(plan)?;
    Ok(format!("sha256:{:x}", Sha256::digest(text.as_bytes())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use naxray_core::geometry::{build_gamma_r_plan, rational};

    #[test]
    fn floats_carry_seventeen_digits() {
        let text = to_canonical_string(&serde_json::json!({"b": 0.1, "a": 1.0})).unwrap();
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["b"].as_f64(), Some(0.1));
    }

    #[test]
    fn non_finite_values_are_refused() {
        assert!(to_canonical_string(&vec![f64::NAN]).is_err());
    }

    #[test]
    fn field_round_trip() {
        let m = Mat::new(
            2,
            vec![
                Complex64::new(1.0, 0.5),
                Complex64::new(0.0, -2.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        let field =
            LatticeField::from_values(2, 2, 2.0, Regime::Multiplicative, vec![(LatticePoint(vec![1, -1]), m)]).unwrap();
        let text = field_to_json(&field).unwrap();
        assert_eq!(field_from_json(&text).unwrap(), field);
        assert_eq!(field_to_json(&field_from_json(&text).unwrap()).unwrap(), text);
    }

    #[test]
    fn sinogram_round_trip() {
        let meta = SinogramMeta { d: 2, n: 1, r: 1.5, transform_kind: TransformKind::Star, plan_id: Some("x".into()) };
        let mut sino = Sinogram::new(meta);
        let ray = Ray::new(vec![rational(1, 3), rational(-7, 2)], vec![2, -1]).unwrap();
        sino.insert(ray.clone(), Mat::scalar(Complex64::new(0.25, 1e-17))).unwrap();
        let text = sinogram_to_json(&sino).unwrap();
        let back = sinogram_from_json(&text).unwrap();
        assert_eq!(back.get(&ray), sino.get(&ray));
        assert_eq!(back.meta(), sino.meta());
    }

    #[test]
    fn plan_round_trip_and_id() {
        let plan = build_gamma_r_plan(2.0, 1.0, 2).unwrap();
        let text = plan_to_json(&plan).unwrap();
        let back = plan_from_json(&text).unwrap();
        assert_eq!(back, plan);
        assert_eq!(plan_id(&back).unwrap(), plan_id(&plan).unwrap());
        let other = build_gamma_r_plan(2.0, 2.0, 2).unwrap();
        assert_ne!(plan_id(&other).unwrap(), plan_id(&plan).unwrap());
    }

    #[test]
    fn wrong_format_tag_is_rejected() {
        let err = field_from_json(r#"{"format": "naxray/0", "d": 2}"#).unwrap_err();
        assert!(err.to_string().contains("naxray/0"));
        assert!(field_from_json(r#"{"d": 2}"#).is_err());
    }

    #[test]
    fn tampered_plan_chords_are_rejected() {
        let plan = build_gamma_r_plan(1.0, 1.0, 2).unwrap();
        let mut doc = plan_to_doc(&plan);
        doc.entries[0].chords[0].length += 0.01;
        let text = to_canonical_string(&doc).unwrap();
        assert!(plan_from_json(&text).is_err());
    }
}
