use std::fmt;

use anyhow::{bail, Context, Result};
use nine_fields::curve_models::{full_torsion_structure, global_data, szpiro_check};
use nine_fields::mod2_square_disc::{known_label, two_division_check, TwoDivisionReport};
use nine_fields::odd_torsion::identify;
use nine_fields::{Field, LocalData, QuadInt, WeierstrassModel};

/// Everything `verify-curve` reports about one model.
pub struct VerifyReport {
    pub input: WeierstrassModel,
    pub minimal_model: WeierstrassModel,
    pub disc_min: QuadInt,
    pub locals: Vec<LocalData>,
    pub conductor_norm: num_bigint::BigInt,
    pub szpiro: bool,
    pub torsion: String,
    pub two_division: TwoDivisionReport,
    pub label: Option<String>,
}

/// Parse five comma-separated coefficients such as `0,w,1,-1,0`.
pub fn parse_ainvs(k: Field, s: &str) -> Result<WeierstrassModel> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        bail!("expected 5 comma-separated a-invariants, got {}", parts.len());
    }
    let mut a = Vec::with_capacity(5);
    for p in parts {
        a.push(QuadInt::parse(k, p).with_context(|| format!("bad coefficient {p:?}"))?);
    }
    let e = WeierstrassModel::new([a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone()]);
    if e.is_singular() {
        bail!("the model {e} is singular");
    }
    Ok(e)
}

pub fn verify_curve(e: &WeierstrassModel) -> Result<VerifyReport> {
    let g = global_data(e)?;
    let m = &g.minimal_model;
    let label = known_label(m).or_else(|| [3, 5, 7].iter().find_map(|&l| identify(m, l)).map(str::to_string));
    Ok(VerifyReport {
        input: e.clone(),
        minimal_model: m.clone(),
        disc_min: g.disc_min.clone(),
        locals: g.locals.clone(),
        conductor_norm: g.conductor_norm(),
        szpiro: szpiro_check(e)?,
        torsion: full_torsion_structure(m)?.to_string(),
        two_division: two_division_check(m)?,
        label,
    })
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.input.field();
        writeln!(f, "field: {k}")?;
        writeln!(f, "input model: {}", self.input)?;
        writeln!(f, "minimal model: {}", self.minimal_model)?;
        writeln!(f, "minimal discriminant: {} (norm {})", self.disc_min, self.disc_min.norm())?;
        writeln!(f, "conductor norm: {}", self.conductor_norm)?;
        for l in &self.locals {
            writeln!(
                f,
                "  prime {} (norm {}): {:?}, Kodaira {}, conductor exponent {}, v(D_min) = {}",
                l.prime, l.prime.norm, l.reduction, l.kodaira, l.f, l.v_min_disc
            )?;
        }
        writeln!(f, "szpiro bound: {}", if self.szpiro { "holds" } else { "FAILS" })?;
        writeln!(f, "torsion: {}", self.torsion)?;
        let t = &self.two_division;
        writeln!(f, "2-division: square discriminant {}, rational root {}", t.square_disc, t.rational_root)?;
        match t.ring_class_field {
            Some(b) => writeln!(f, "2-division field = ring class field: {b}")?,
            None => writeln!(f, "2-division field = ring class field: n/a")?,
        }
        if let Some(l) = &self.label {
            writeln!(f, "label: {l}")?;
        }
        Ok(())
    }
}
