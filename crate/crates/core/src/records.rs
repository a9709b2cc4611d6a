//! Exported curve records.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::curve_models::{global_data, torsion_structure, GlobalData, WeierstrassModel};
use crate::field_arith::QuadInt;
use crate::{Field, Result};

/// An integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.collect_str(&self.0),
        }
    }
}

pub type Coords = [Int; 2];

pub fn coords(q: &QuadInt) -> Coords {
    [Int(q.x().clone()), Int(q.y().clone())]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conductor {
    pub norm: Int,
    pub gens: Vec<Coords>,
    pub exponents: Vec<u32>,
}

/// A curve found by one of the searches, with its verified reduction data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveRecord {
    pub field_d: u32,
    /// A global minimal model, reduced.
    pub ainvs: Vec<Coords>,
    pub conductor: Conductor,
    pub disc_min: Coords,
    /// Valuations of the minimal discriminant at the conductor primes.
    pub disc_valuations: Vec<u32>,
    pub kodaira: Vec<String>,
    pub family: String,
    pub torsion_structure: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CurveRecord {
    /// Minimalize `e`, run Tate at every bad prime and record the result.
    /// `extra_orders` are orders prime to 6 of points known to be on `e`.
    pub fn build(
        e: &WeierstrassModel,
        family: &str,
        extra_orders: &[u32],
        label: Option<&str>,
    ) -> Result<(CurveRecord, GlobalData)> {
        let g = global_data(e)?;
        let rec = CurveRecord::from_global(&g, family, extra_orders, label);
        Ok((rec, g))
    }

    pub fn from_global(
        g: &GlobalData,
        family: &str,
        extra_orders: &[u32],
        label: Option<&str>,
    ) -> CurveRecord {
        let m = &g.minimal_model;
        let bad: Vec<_> = g.locals.iter().filter(|l| l.f > 0).collect();
        CurveRecord {
            field_d: m.field().d(),
            ainvs: m.ainvs().iter().map(|a| coords(a)).collect(),
            conductor: Conductor {
                norm: Int(g.conductor_norm()),
                gens: bad.iter().map(|l| coords(&l.prime.gen)).collect(),
                exponents: bad.iter().map(|l| l.f).collect(),
            },
            disc_min: coords(&g.disc_min),
            disc_valuations: bad.iter().map(|l| l.v_min_disc).collect(),
            kodaira: bad.iter().map(|l| l.kodaira.to_string()).collect(),
            family: family.to_string(),
            torsion_structure: torsion_structure(m, extra_orders).to_string(),
            label: label.map(str::to_string),
        }
    }

    pub fn field(&self) -> Field {
        Field::new(self.field_d as i64).expect("record field")
    }

    pub fn model(&self) -> WeierstrassModel {
        let f = self.field();
        let a: Vec<QuadInt> = self
            .ainvs
            .iter()
            .map(|[x, y]| QuadInt::new(f, x.0.clone(), y.0.clone()))
            .collect();
        WeierstrassModel::new([
            a[0].clone(),
            a[1].clone(),
            a[2].clone(),
            a[3].clone(),
            a[4].clone(),
        ])
    }

    pub fn conductor_norm(&self) -> &BigInt {
        &self.conductor.norm.0
    }

    pub fn disc_min(&self) -> QuadInt {
        let [x, y] = &self.disc_min;
        QuadInt::new(self.field(), x.0.clone(), y.0.clone())
    }

    /// Conductor primes as elements.
    pub fn conductor_gens(&self) -> Vec<QuadInt> {
        let f = self.field();
        self.conductor
            .gens
            .iter()
            .map(|[x, y]| QuadInt::new(f, x.0.clone(), y.0.clone()))
            .collect()
    }

    pub fn is_prime_power_conductor(&self) -> bool {
        self.conductor.gens.len() == 1
    }

    /// `N(D_min) <= N(conductor)^6`.
    pub fn szpiro(&self) -> bool {
        self.disc_min().norm() <= num_traits::pow(self.conductor_norm().clone(), 6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_of_47_curve() {
        let k = Field::new(11).unwrap();
        let e = WeierstrassModel::new([k.zero(), k.w(), k.one(), k.int(-1), k.zero()]);
        let (r, _) = CurveRecord::build(&e, "example", &[], Some("2.0.11.1-47.1-a1")).unwrap();
        assert_eq!(r.conductor_norm(), &BigInt::from(47));
        assert_eq!(r.disc_valuations, vec![2]);
        assert_eq!(r.kodaira, vec!["I2".to_string()]);
        assert!(r.szpiro());
        assert_eq!(r.torsion_structure, "trivial");
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"field_d\":11"));
        assert!(json.contains("\"label\":\"2.0.11.1-47.1-a1\""));
    }

    #[test]
    fn big_coordinates_serialize_as_strings() {
        let big = BigInt::from(i64::MAX) * BigInt::from(10);
        let s = serde_json::to_string(&Int(big.clone())).unwrap();
        assert_eq!(s, format!("\"{big}\""));
        assert_eq!(serde_json::to_string(&Int(BigInt::from(-5))).unwrap(), "-5");
    }
}
