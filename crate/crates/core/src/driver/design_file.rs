//! Serialized design: every real as a decimal string, indices 1-based.

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::{parse_rational, Extension, RunConfig};
use crate::error::{Error, Result};
use crate::inverse::TridiagonalChain;
use crate::mp::{self, Prec};
use crate::network::{MirrorMode, NetworkFile, Subspace};
use crate::selector::{Target, TargetSpectrum};

pub const FORMAT: &str = "encoded-transfer-design/1";

fn dec(x: &Float, digits: usize) -> String {
    mp::to_decimal(x, digits)
}

fn decs(xs: &[Float], digits: usize) -> Vec<String> {
    xs.iter().map(|x| dec(x, digits)).collect()
}

fn parse_all(prec: Prec, xs: &[String]) -> Result<Vec<Float>> {
    xs.iter().map(|s| mp::parse_real(prec, s)).collect()
}

fn default_j_prime() -> String {
    "1".into()
}

/// Controlled spectrum, either exact (`plus`, `minus`, `t0_over_pi`) or on a
/// grid (`delta` with numerators `n`, value `n delta / 2`).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TargetsFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plus: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub minus: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0_over_pi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub list: Vec<TargetEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TargetEntry {
    pub n: i64,
    /// `n mod 4`.
    pub parity: i64,
    pub subspace: String,
    pub value: String,
}

impl TargetsFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn is_exact(&self) -> bool {
        self.t0_over_pi.is_some()
    }

    pub fn to_spectrum(&self, prec: Prec) -> Result<TargetSpectrum> {
        if let Some(t) = &self.t0_over_pi {
            let plus = self.plus.iter().map(|s| parse_rational(s)).collect::<Result<Vec<Rational>>>()?;
            let minus = self.minus.iter().map(|s| parse_rational(s)).collect::<Result<Vec<Rational>>>()?;
            return TargetSpectrum::from_rationals(&plus, &minus, &parse_rational(t)?, prec);
        }
        let delta = mp::parse_real(prec, self.delta.as_deref().ok_or_else(|| Error::InvalidConfig("targets need t0_over_pi or delta".into()))?)?;
        let targets = self
            .list
            .iter()
            .map(|e| {
                Ok(Target {
                    value: Float::with_val(prec, &delta * e.n) / 2u32,
                    subspace: Subspace::parse(&e.subspace)?,
                    half_units: e.n,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = TargetSpectrum::new(targets, delta);
        spec.check_parity()?;
        Ok(spec)
    }

    pub fn from_spectrum(spec: &TargetSpectrum, digits: usize, exact: Option<&TargetsFile>) -> Self {
        let mut out = exact.filter(|e| e.is_exact()).cloned().unwrap_or_default();
        out.delta = Some(dec(&spec.delta, digits));
        out.list = spec
            .targets
            .iter()
            .map(|t| TargetEntry {
                n: t.half_units,
                parity: t.half_units.rem_euclid(4),
                subspace: t.subspace.symbol().into(),
                value: dec(&t.value, digits),
            })
            .collect();
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainSection {
    /// From the free end to the site joined to the network.
    pub couplings_outer_first: Vec<String>,
    /// Empty means all zero.
    #[serde(default)]
    pub fields_outer_first: Vec<String>,
    pub j: String,
}

impl ChainSection {
    pub fn to_chain(&self, prec: Prec) -> Result<(TridiagonalChain, Float)> {
        let couplings = parse_all(prec, &self.couplings_outer_first)?;
        let n = if self.couplings_outer_first.is_empty() && self.fields_outer_first.is_empty() { 0 } else { couplings.len() + 1 };
        let fields = if self.fields_outer_first.is_empty() { mp::zeros(n, prec) } else { parse_all(prec, &self.fields_outer_first)? };
        if fields.len() != n && !(n == 0 && fields.len() == 1) {
            return Err(Error::Parse(format!("{} couplings need {} fields, got {}", couplings.len(), n, fields.len())));
        }
        Ok((TridiagonalChain { couplings, fields }, mp::parse_real(prec, &self.j)?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationSection {
    pub bipartite: bool,
    pub field_free: bool,
    pub even: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetrySection {
    pub mirrored: bool,
    /// Central vertices as `(original vertex, is mirror copy)`.
    pub vertices: Vec<(usize, bool)>,
    /// Mirror permutation of the central vertices.
    pub mirror: Vec<usize>,
    pub classification: ClassificationSection,
    pub supported_dims: (usize, usize),
    pub shared_eigenvalues: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateSection {
    pub real_roots: bool,
    pub nonreal_roots: usize,
    pub j_squared_positive: bool,
    pub strict_interlacing: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterpolantSection {
    pub kind: String,
    /// `P_A`, ascending, monic.
    pub p: Vec<String>,
    /// `Q_A`, ascending, monic.
    pub q: Vec<String>,
    pub j_squared: String,
    pub residual: String,
    pub certificate: CertificateSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightsSection {
    pub nodes: Vec<String>,
    pub weights: Vec<String>,
    pub sum: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LayoutSection {
    pub n_a: usize,
    pub n_c: usize,
    pub dim: usize,
    pub region_size: usize,
    pub p_out: Vec<usize>,
    pub p_in: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EncodingSection {
    pub vectors: Vec<Vec<String>>,
}

impl EncodingSection {
    pub fn to_vectors(&self, prec: Prec) -> Result<Vec<Vec<Float>>> {
        self.vectors.iter().map(|v| parse_all(prec, v)).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: String,
    pub subspace: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumSection {
    pub controlled: Vec<SpectrumEntry>,
    pub uncontrolled: Vec<SpectrumEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportSection {
    pub success: bool,
    pub t0: String,
    pub phase: (String, String),
    pub per_vector_fidelity: Vec<String>,
    pub min_singular_value: String,
    pub singular_values: Vec<String>,
    #[serde(rename = "ghz_F")]
    pub ghz_f: String,
    pub containment_residual: String,
    pub spectrum: SpectrumSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignFile {
    pub format: String,
    pub precision_bits: Prec,
    pub network: NetworkFile,
    #[serde(default = "default_j_prime")]
    pub j_prime: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror_mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetrySection>,
    pub targets: TargetsFile,
    /// Overrides `pi / delta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shrink: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolant: Option<InterpolantSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsSection>,
    pub chain: ChainSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<EncodingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportSection>,
}

impl DesignFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: DesignFile = serde_json::from_str(text)?;
        if f.format != FORMAT {
            return Err(Error::Parse(format!("unknown design format {:?}", f.format)));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_extension(ext: &Extension, network: &NetworkFile, cfg: &RunConfig, targets: Option<&TargetsFile>) -> Self {
        let digits = mp::digits_for(cfg.precision_bits);
        let d = |x: &Float| dec(x, digits);
        let sys = &ext.system;
        let design = &ext.design;
        let cert = &ext.certificate;
        let entry = |e: &crate::transfer::Eigenpair| SpectrumEntry { value: d(&e.value), subspace: e.subspace.symbol().into() };
        let mut chain_fields = ext.chain.fields.clone();
        if chain_fields.iter().all(|f| f.is_zero()) {
            chain_fields.clear();
        }
        DesignFile {
            format: FORMAT.into(),
            precision_bits: cfg.precision_bits,
            network: network.clone(),
            j_prime: cfg.j_prime.to_string(),
            mirror_mode: Some(match cfg.mirror {
                MirrorMode::Auto => "auto".into(),
                MirrorMode::Always => "always".into(),
            }),
            symmetry: Some(SymmetrySection {
                mirrored: sys.mirrored,
                vertices: sys.vertices.iter().map(|v| (v.original + 1, v.copy)).collect(),
                mirror: sys.mirror.iter().map(|k| k + 1).collect(),
                classification: ClassificationSection {
                    bipartite: ext.classification.bipartite,
                    field_free: ext.classification.field_free,
                    even: ext.classification.even,
                },
                supported_dims: (ext.blocks.0.dim(), ext.blocks.1.dim()),
                shared_eigenvalues: decs(&ext.shared, 20),
            }),
            targets: TargetsFile::from_spectrum(&ext.targets, digits, targets),
            t0: None,
            shrink: ext.shrink.as_ref().map(|s| s.to_string()),
            interpolant: Some(InterpolantSection {
                kind: ext.interpolant.kind.name().into(),
                p: decs(ext.interpolant.p.coeffs(), digits),
                q: decs(ext.interpolant.q.coeffs(), digits),
                j_squared: d(&ext.interpolant.j_squared),
                residual: dec(&ext.interpolant.residual, 6),
                certificate: CertificateSection {
                    real_roots: cert.real_roots,
                    nonreal_roots: cert.nonreal,
                    j_squared_positive: cert.j_squared_positive,
                    strict_interlacing: cert.interlacing.holds,
                },
            }),
            weights: Some(WeightsSection { nodes: decs(&ext.weights.nodes, digits), weights: decs(&ext.weights.weights, digits), sum: d(&ext.weights.sum) }),
            chain: ChainSection { couplings_outer_first: decs(&ext.chain.couplings, digits), fields_outer_first: decs(&chain_fields, digits), j: d(&ext.j) },
            layout: Some(LayoutSection {
                n_a: design.assembled.n_a,
                n_c: design.assembled.n_c,
                dim: design.dim(),
                region_size: design.region_size,
                p_out: design.p_out.iter().map(|k| k + 1).collect(),
                p_in: design.p_in.iter().map(|k| k + 1).collect(),
            }),
            encoding: Some(EncodingSection { vectors: design.encode.iter().map(|v| decs(v, digits)).collect() }),
            report: Some(ReportSection {
                success: ext.succeeded(),
                t0: d(&design.t0),
                phase: (dec(&ext.fidelity.phase.0, 20), dec(&ext.fidelity.phase.1, 20)),
                per_vector_fidelity: decs(&ext.fidelity.per_vector, 30),
                min_singular_value: dec(&ext.min_singular_value(), 30),
                singular_values: decs(&ext.creation.singular_values, 30),
                ghz_f: dec(&ext.ghz, 30),
                containment_residual: dec(&ext.containment, 6),
                spectrum: SpectrumSection {
                    controlled: design.controlled().map(entry).collect(),
                    uncontrolled: design.uncontrolled().map(entry).collect(),
                },
            }),
        }
    }
}
