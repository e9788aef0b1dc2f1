use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::space::Space;
use crate::algebra::torus::{char_eval, TorusJson, TorusValue};
use crate::error::{Error, Result};
use crate::ncpoly::NCPoly;

/// A complex-valued function on `F_p^n`. Phase functions `e(P)` keep their
/// polynomial so exact paths can use it.
#[derive(Clone, Debug)]
pub struct BoundedFunction {
    space: Space,
    values: Vec<Complex64>,
    phase: Option<NCPoly>,
}

/// One value in the JSON form: either a complex number or a torus phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Complex { re: f64, im: f64 },
    Phase(TorusJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub p: u32,
    pub n: usize,
    pub values: Vec<ValueJson>,
}

impl BoundedFunction {
    pub fn from_values(space: Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::DimensionMismatch { expected: space.size(), got: values.len() });
        }
        Ok(Self { space, values, phase: None })
    }

    pub fn from_fn(space: Space, f: impl Fn(usize) -> Complex64) -> Self {
        Self { space, values: (0..space.size()).map(f).collect(), phase: None }
    }

    /// `e(P)`.
    pub fn phase(poly: &NCPoly) -> Self {
        let values = (0..poly.space().size()).map(|x| char_eval(poly.value(x))).collect();
        Self { space: *poly.space(), values, phase: Some(poly.clone()) }
    }

    pub fn one(space: Space) -> Self {
        Self::phase(&NCPoly::zero(space))
    }

    /// Independent uniform samples from the closed unit disk.
    pub fn random<R: Rng + ?Sized>(space: Space, rng: &mut R) -> Self {
        Self::from_fn_mut(space, |_| {
            let r = rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(r, theta)
        })
    }

    fn from_fn_mut(space: Space, mut f: impl FnMut(usize) -> Complex64) -> Self {
        Self { space, values: (0..space.size()).map(&mut f).collect(), phase: None }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn as_phase(&self) -> Option<&NCPoly> {
        self.phase.as_ref()
    }

    pub fn is_one_bounded(&self) -> bool {
        self.values.iter().all(|z| z.norm() <= 1.0 + 1e-12)
    }

    /// `Delta_h f(x) = f(x + h) conj(f(x))`.
    pub fn mult_derivative(&self, h: usize) -> Self {
        if let Some(p) = &self.phase {
            return Self::phase(&p.derivative(h));
        }
        let values = (0..self.values.len())
            .map(|x| self.values[self.space.add(x, h)] * self.values[x].conj())
            .collect();
        Self { space: self.space, values, phase: None }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let phase = match (&self.phase, &other.phase) {
            (Some(a), Some(b)) => a.add(b).ok(),
            _ => None,
        };
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Self { space: self.space, values, phase }
    }

    pub fn add(&self, other: &Self) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Self { space: self.space, values, phase: None }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { space: self.space, values: self.values.iter().map(|v| v * c).collect(), phase: None }
    }

    pub fn conj(&self) -> Self {
        let phase = self.phase.as_ref().map(NCPoly::neg);
        Self { space: self.space, values: self.values.iter().map(|v| v.conj()).collect(), phase }
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// `(E |f|^q)^(1/q)`.
    pub fn lp_norm(&self, q: f64) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm().powf(q)).sum();
        (s / self.values.len() as f64).powf(1.0 / q)
    }

    pub fn to_json(&self) -> FunctionJson {
        let values = match &self.phase {
            Some(p) => (0..self.values.len())
                .map(|x| ValueJson::Phase(p.value(x).to_json()))
                .collect(),
            None => self.values.iter().map(|z| ValueJson::Complex { re: z.re, im: z.im }).collect(),
        };
        FunctionJson { p: self.space.p(), n: self.space.n(), values }
    }

    /// Phase-only inputs become exact `e(P)`; anything else is complex.
    pub fn from_json(j: &FunctionJson) -> Result<Self> {
        let space = Space::new(j.p, j.n)?;
        if j.values.len() != space.size() {
            return Err(Error::DimensionMismatch { expected: space.size(), got: j.values.len() });
        }
        let phases: Option<Vec<TorusValue>> = j
            .values
            .iter()
            .map(|v| match v {
                ValueJson::Phase(t) => Some(TorusValue::from_json(j.p, *t)),
                ValueJson::Complex { .. } => None,
            })
            .map(|o| o.transpose())
            .collect::<Result<Option<Vec<_>>>>()?;
        if let Some(ph) = phases {
            return Ok(Self::phase(&NCPoly::from_values(space, &ph)?));
        }
        let values = j
            .values
            .iter()
            .map(|v| match *v {
                ValueJson::Complex { re, im } => Complex64::new(re, im),
                ValueJson::Phase(t) => TorusValue::from_json(j.p, t).map(char_eval).unwrap_or_default(),
            })
            .collect();
        Self::from_values(space, values)
    }
}
