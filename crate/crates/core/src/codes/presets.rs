//! Numeric codebooks ready for simulation: quaternionic codes, the
//! Belfiore–Rekaya variant and the Golden code.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

use super::power_factor;
use super::quat::{codeword_at, gen_codebook_2x2};
use crate::algebras::QuaternionAlgebra;
use crate::error::{Error, Result};
use crate::exactnum::{BaseField, GaussianRational};

type G = GaussianRational;

pub const BRANCH_NOTE: &str = "square roots on the principal branch, arg in (-pi/2, pi/2]";

/// Codewords as dense complex matrices, already scaled by `1/√P`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatCodebook {
    pub name: String,
    pub dim: usize,
    /// Row-major `dim × dim` matrices.
    pub codewords: Vec<Vec<Complex64>>,
    pub power_factor: f64,
    /// Information symbols per codeword, when the code has them.
    pub symbols: Vec<Vec<G>>,
    pub notes: Vec<String>,
}

impl FloatCodebook {
    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Mean of `‖X‖_F² / dim` over the codebook: the average energy per
    /// antenna per channel use.
    pub fn mean_energy(&self) -> f64 {
        if self.codewords.is_empty() {
            return 0.0;
        }
        let total: f64 = self
            .codewords
            .iter()
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum();
        total / (self.codewords.len() * self.dim * self.dim) as f64
    }

    pub fn to_json(&self) -> CodebookJson {
        CodebookJson {
            name: self.name.clone(),
            dim: self.dim,
            power_factor: self.power_factor,
            notes: self.notes.clone(),
            codewords: self
                .codewords
                .iter()
                .enumerate()
                .map(|(k, c)| CodewordJson {
                    symbols: self.symbols.get(k).map(|s| s.iter().map(ToString::to_string).collect()),
                    matrix: c.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &CodebookJson) -> Result<Self> {
        let n2 = j.dim * j.dim;
        let mut codewords = Vec::with_capacity(j.codewords.len());
        let mut symbols = Vec::new();
        for c in &j.codewords {
            if c.matrix.len() != n2 {
                return Err(Error::DimensionMismatch { expected: n2, got: c.matrix.len() });
            }
            codewords.push(c.matrix.iter().map(|[re, im]| Complex64::new(*re, *im)).collect());
            if let Some(s) = &c.symbols {
                symbols.push(s.iter().map(|t| t.parse()).collect::<Result<Vec<G>>>()?);
            }
        }
        Ok(FloatCodebook {
            name: j.name.clone(),
            dim: j.dim,
            codewords,
            power_factor: j.power_factor,
            symbols,
            notes: j.notes.clone(),
        })
    }

    /// Row-major little-endian `(re, im)` doubles, codeword after codeword.
    pub fn write_flat(&self, mut w: impl Write) -> Result<()> {
        for c in &self.codewords {
            for z in c {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_flat(name: &str, dim: usize, mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let per = dim * dim * 16;
        if per == 0 || bytes.len() % per != 0 {
            return Err(Error::Parse(format!("flat codebook of {} bytes is not a multiple of {per}", bytes.len())));
        }
        let f = |k: usize| f64::from_le_bytes(bytes[k..k + 8].try_into().expect("8 bytes"));
        let codewords = bytes
            .chunks(per)
            .enumerate()
            .map(|(n, _)| {
                (0..dim * dim)
                    .map(|e| {
                        let off = n * per + e * 16;
                        Complex64::new(f(off), f(off + 8))
                    })
                    .collect()
            })
            .collect();
        Ok(FloatCodebook {
            name: name.to_string(),
            dim,
            codewords,
            power_factor: 1.0,
            symbols: Vec::new(),
            notes: Vec::new(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodewordJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symbols: Option<Vec<String>>,
    /// Row-major `[re, im]` pairs.
    pub matrix: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodebookJson {
    pub name: String,
    pub dim: usize,
    pub power_factor: f64,
    pub notes: Vec<String>,
    pub codewords: Vec<CodewordJson>,
}

fn symbols4(alphabet: &[G], idx: usize) -> [G; 4] {
    let m = alphabet.len();
    std::array::from_fn(|k| alphabet[(idx / m.pow(3 - k as u32)) % m].clone())
}

fn check_alphabet(alphabet: &[G]) -> Result<()> {
    if alphabet.is_empty() {
        return Err(Error::InvalidConfig("empty alphabet".into()));
    }
    Ok(())
}

/// The codebook layout `[[α+β√a, γ+δ√a], [b(γ−δ√a), α−β√a]]`, optionally
/// scaled by `1/√P`.
pub fn quaternion_codebook(alg: &QuaternionAlgebra, alphabet: &[G], normalize: bool) -> Result<FloatCodebook> {
    let p = if normalize { power_factor(alg.a(), alg.b()) } else { 1.0 };
    let s = 1.0 / p.sqrt();
    let codewords = gen_codebook_2x2(alg, alphabet)?
        .map(|c| c.to_complex().iter().flatten().map(|z| z * s).collect())
        .collect();
    let m = alphabet.len();
    Ok(FloatCodebook {
        name: alg.to_string(),
        dim: 2,
        codewords,
        power_factor: p,
        symbols: (0..m.pow(4)).map(|k| codeword_at(alg, alphabet, k).symbols().to_vec()).collect(),
        notes: vec![BRANCH_NOTE.into()],
    })
}

/// `(a, b)` over `ℚ(i)` from small integer pairs.
pub fn gaussian_algebra(a: (i64, i64), b: (i64, i64)) -> QuaternionAlgebra {
    QuaternionAlgebra::new(BaseField::GaussianRationals, G::from_ints(a.0, a.1), G::from_ints(b.0, b.1))
        .expect("nonzero parameters")
}

/// The Belfiore–Rekaya code from `(i, 1+2i)` with `√(1+2i)` spread over
/// both off-diagonal entries. Determinants are unchanged.
///
/// `P` follows the same averaging as [`power_factor`], with the
/// off-diagonal weight `|√(1+2i)|²` in place of `b`'s: `1 + √5`.
pub fn br_codebook(alphabet: &[G], normalize: bool) -> Result<FloatCodebook> {
    check_alphabet(alphabet)?;
    let sqrt_i = Complex64::i().sqrt();
    let sqrt_b = Complex64::new(1.0, 2.0).sqrt();
    let p = if normalize {
        (1.0 + sqrt_i.norm_sqr()) * (2.0 + 2.0 * sqrt_b.norm_sqr()) / 4.0
    } else {
        1.0
    };
    let s = 1.0 / p.sqrt();
    let m = alphabet.len();
    let mut codewords = Vec::with_capacity(m.pow(4));
    let mut symbols = Vec::with_capacity(m.pow(4));
    for idx in 0..m.pow(4) {
        let sym = symbols4(alphabet, idx);
        let [al, be, ga, de] = sym.clone().map(|g| g.to_complex());
        codewords.push(
            [
                al + be * sqrt_i,
                sqrt_b * (ga + de * sqrt_i),
                sqrt_b * (ga - de * sqrt_i),
                al - be * sqrt_i,
            ]
            .iter()
            .map(|z| z * s)
            .collect(),
        );
        symbols.push(sym.to_vec());
    }
    Ok(FloatCodebook {
        name: "br".into(),
        dim: 2,
        codewords,
        power_factor: p,
        symbols,
        notes: vec![BRANCH_NOTE.into()],
    })
}

/// The Golden code, taken as fixed numeric matrices:
/// `(1/√5)[[α(a+bθ), α(c+dθ)], [iᾱ(c+dθ̄), ᾱ(a+bθ̄)]]` with
/// `θ = (1+√5)/2`, `θ̄ = (1−√5)/2`, `α = 1+i−iθ`, `ᾱ = 1+i−iθ̄`.
pub fn golden_codebook(alphabet: &[G]) -> Result<FloatCodebook> {
    check_alphabet(alphabet)?;
    let r5 = 5f64.sqrt();
    let theta = (1.0 + r5) / 2.0;
    let theta_bar = (1.0 - r5) / 2.0;
    let i = Complex64::i();
    let alpha = Complex64::new(1.0, 1.0) - i * theta;
    let alpha_bar = Complex64::new(1.0, 1.0) - i * theta_bar;
    let m = alphabet.len();
    let mut codewords = Vec::with_capacity(m.pow(4));
    let mut symbols = Vec::with_capacity(m.pow(4));
    for idx in 0..m.pow(4) {
        let sym = symbols4(alphabet, idx);
        let [a, b, c, d] = sym.clone().map(|g| g.to_complex());
        codewords.push(
            [
                alpha * (a + b * theta),
                alpha * (c + d * theta),
                i * alpha_bar * (c + d * theta_bar),
                alpha_bar * (a + b * theta_bar),
            ]
            .iter()
            .map(|z| z / r5)
            .collect(),
        );
        symbols.push(sym.to_vec());
    }
    Ok(FloatCodebook {
        name: "golden".into(),
        dim: 2,
        codewords,
        power_factor: 1.0,
        symbols,
        notes: vec!["fixed numeric construction; 1/sqrt(5) normalisation built in".into()],
    })
}

/// Named codes accepted by the CLI and the simulation presets.
#[derive(Clone, Debug, PartialEq)]
pub enum CodePreset {
    Golden,
    Br,
    Quaternion(QuaternionAlgebra),
}

impl CodePreset {
    pub fn name(&self) -> String {
        match self {
            CodePreset::Golden => "golden".into(),
            CodePreset::Br => "br".into(),
            CodePreset::Quaternion(q) => q.to_string(),
        }
    }

    pub fn build(&self, alphabet: &[G], normalize: bool) -> Result<FloatCodebook> {
        match self {
            CodePreset::Golden => golden_codebook(alphabet),
            CodePreset::Br => br_codebook(alphabet, normalize),
            CodePreset::Quaternion(q) => quaternion_codebook(q, alphabet, normalize),
        }
    }
}

impl std::str::FromStr for CodePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "golden" | "g" => Ok(CodePreset::Golden),
            "br" => Ok(CodePreset::Br),
            _ => match s.parse::<crate::algebras::Algebra>()? {
                crate::algebras::Algebra::Quaternion(q) => Ok(CodePreset::Quaternion(q)),
                crate::algebras::Algebra::Biquaternion(_) => {
                    Err(Error::Unsupported("simulation presets are 2×2 codes".into()))
                }
            },
        }
    }
}

/// The six 2×2 comparison codes behind the `fig1-*` presets, best first
/// where the ordering is known.
pub fn fig1_codes() -> Vec<CodePreset> {
    vec![
        CodePreset::Golden,
        CodePreset::Quaternion(gaussian_algebra((1, 1), (0, 1))),
        CodePreset::Quaternion(gaussian_algebra((2, 1), (0, 1))),
        CodePreset::Quaternion(gaussian_algebra((1, 2), (0, 1))),
        CodePreset::Br,
        CodePreset::Quaternion(gaussian_algebra((5, 0), (0, 1))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qam4() -> Vec<G> {
        vec![G::from_ints(1, 1), G::from_ints(1, -1), G::from_ints(-1, 1), G::from_ints(-1, -1)]
    }

    fn det(c: &[Complex64]) -> Complex64 {
        c[0] * c[3] - c[1] * c[2]
    }

    #[test]
    fn br_spreading_keeps_determinants() {
        let br = br_codebook(&qam4(), false).unwrap();
        let plain = quaternion_codebook(&gaussian_algebra((0, 1), (1, 2)), &qam4(), false).unwrap();
        assert_eq!(br.len(), 256);
        for (x, y) in br.codewords.iter().zip(&plain.codewords) {
            assert!((det(x) - det(y)).norm() < 1e-12);
        }
    }

    #[test]
    fn normalised_energies() {
        // P makes the mean entry energy equal the mean symbol energy (2 for 4-QAM)
        for code in fig1_codes() {
            let cb = code.build(&qam4(), true).unwrap();
            let e = cb.mean_energy();
            match code {
                CodePreset::Golden => assert!((e - 2.0).abs() < 1e-9, "{e}"),
                _ => assert!((e - 2.0).abs() < 1e-9, "{}: {e}", code.name()),
            }
        }
    }

    #[test]
    fn golden_min_det() {
        // δ_min of the Golden code over ℤ[i] is 1/5
        let g = golden_codebook(&qam4()).unwrap();
        let mut best = f64::INFINITY;
        for x in &g.codewords {
            for y in &g.codewords {
                let d: Vec<Complex64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                if d.iter().any(|z| z.norm() > 1e-12) {
                    best = best.min(det(&d).norm_sqr());
                }
            }
        }
        // differences of 4-QAM symbols are 2·ℤ[i], so the minimum scales by 16
        assert!((best - 16.0 / 5.0).abs() < 1e-9, "{best}");
    }

    #[test]
    fn json_and_flat_round_trip() {
        let cb = quaternion_codebook(&gaussian_algebra((1, 2), (0, 1)), &qam4(), true).unwrap();
        let j = serde_json::to_string(&cb.to_json()).unwrap();
        let back = FloatCodebook::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, cb);
        let mut bytes = Vec::new();
        cb.write_flat(&mut bytes).unwrap();
        assert_eq!(bytes.len(), 256 * 4 * 16);
        let flat = FloatCodebook::read_flat("x", 2, bytes.as_slice()).unwrap();
        assert_eq!(flat.codewords, cb.codewords);
    }

    #[test]
    fn presets_parse() {
        assert_eq!("golden".parse::<CodePreset>().unwrap(), CodePreset::Golden);
        assert_eq!("BR".parse::<CodePreset>().unwrap(), CodePreset::Br);
        assert_eq!("(1+2i,i)/Qi".parse::<CodePreset>().unwrap().name(), "(1+2i,i)/Qi");
        assert!("(2,8;x,y)/Q(x,y)".parse::<CodePreset>().is_err());
    }
}
