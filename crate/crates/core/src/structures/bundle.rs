use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::{BasisSpace, LinMap, MultiOp};
use crate::scalar::{format_point, params_from, Params, Rational, Scalar};

/// One way of satisfying the ring constraints: parameter `param` is replaced by `value`.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub param: usize,
    pub value: Scalar,
}

/// Coefficient ring: rational functions in `params`, restricted by `constraints` (each must vanish).
#[derive(Clone, Debug, PartialEq)]
pub struct Ring {
    pub params: Params,
    pub constraints: Vec<Scalar>,
    pub branches: Vec<Branch>,
}

impl Ring {
    pub fn rational() -> Self {
        Ring::free(&[] as &[&str])
    }

    pub fn free<S: AsRef<str>>(names: &[S]) -> Self {
        Ring { params: params_from(names), constraints: Vec::new(), branches: Vec::new() }
    }

    pub fn param_index(&self, name: &str) -> Result<usize> {
        self.params.iter().position(|p| p == name).ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    pub fn is_constrained(&self) -> bool {
        !self.constraints.is_empty()
    }

    /// Fails with `ConstraintViolated` unless every constraint vanishes at `point`.
    pub fn check_point(&self, point: &[Rational]) -> Result<()> {
        if point.len() != self.params.len() {
            return Err(Error::Invalid(format!(
                "point assigns {} values for {} parameters",
                point.len(),
                self.params.len()
            )));
        }
        for c in &self.constraints {
            let v = c.eval(point).map_err(|_| Error::ConstraintViolated(format_point(&self.params, point)))?;
            if v != Rational::from_integer(0.into()) {
                return Err(Error::ConstraintViolated(format_point(&self.params, point)));
            }
        }
        Ok(())
    }

    /// Parses `k1=3,k2=5` into a point in parameter order; unnamed parameters default to 0.
    pub fn parse_point(&self, text: &str) -> Result<Vec<Rational>> {
        let mut point = vec![Rational::from_integer(0.into()); self.params.len()];
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = part
                .split_once(['=', ':'])
                .ok_or_else(|| Error::Invalid(format!("expected name=value, got `{part}`")))?;
            let idx = self.param_index(name.trim())?;
            let v = crate::scalar::parse_scalar(value.trim(), &params_from(&[] as &[&str]))?;
            point[idx] = v.as_rational().cloned().expect("parameter-free scalar is rational");
        }
        Ok(point)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub construction: String,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A space with named multilinear operations and linear maps over one coefficient ring.
#[derive(Clone, Debug)]
pub struct AlgebraBundle {
    pub id: String,
    pub space: BasisSpace,
    pub ring: Ring,
    pub ops: BTreeMap<String, MultiOp>,
    pub maps: BTreeMap<String, LinMap>,
    pub provenance: Option<Provenance>,
}

/// Arity fixed by naming convention, if any.
pub fn conventional_arity(name: &str) -> Option<usize> {
    match name {
        "mul" | "br" | "star" => Some(2),
        "tbr" => Some(3),
        _ => None,
    }
}

impl AlgebraBundle {
    pub fn new(id: &str, space: BasisSpace, ring: Ring) -> Self {
        AlgebraBundle { id: id.to_string(), space, ring, ops: BTreeMap::new(), maps: BTreeMap::new(), provenance: None }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn op(&self, name: &str) -> Result<&MultiOp> {
        self.ops.get(name).ok_or_else(|| Error::MissingOp(name.to_string()))
    }

    pub fn map(&self, name: &str) -> Result<&LinMap> {
        self.maps.get(name).ok_or_else(|| Error::MissingMap(name.to_string()))
    }

    pub fn with_op(mut self, name: &str, op: MultiOp) -> Self {
        self.ops.insert(name.to_string(), op);
        self
    }

    pub fn with_map(mut self, name: &str, m: LinMap) -> Self {
        self.maps.insert(name.to_string(), m);
        self
    }

    /// Checks dimensions and conventional arities.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for (name, op) in &self.ops {
            if op.dim() != n {
                return Err(Error::SpaceMismatch(format!("op `{name}` has dimension {}", op.dim())));
            }
            if let Some(a) = conventional_arity(name) {
                if op.arity() != a {
                    return Err(Error::ArityMismatch { name: name.clone(), expected: a, found: op.arity() });
                }
            }
        }
        for (name, m) in &self.maps {
            if m.dim() != n {
                return Err(Error::SpaceMismatch(format!("map `{name}` has dimension {}", m.dim())));
            }
        }
        Ok(())
    }

    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<AlgebraBundle> {
        let mut out = self.clone();
        for op in out.ops.values_mut() {
            *op = op.map_scalars(&f)?;
        }
        for m in out.maps.values_mut() {
            *m = m.map_scalars(&f)?;
        }
        Ok(out)
    }

    /// Specializes every coefficient at a point (after checking the constraints).
    pub fn eval_at(&self, point: &[Rational]) -> Result<AlgebraBundle> {
        self.ring.check_point(point)?;
        let mut out = self.map_scalars(|s| s.eval(point).map(Scalar::Rat))?;
        out.ring.constraints.clear();
        out.ring.branches.clear();
        Ok(out)
    }

    /// Substitutes a constraint branch symbolically.
    pub fn on_branch(&self, branch: &Branch) -> Result<AlgebraBundle> {
        let values: Vec<Scalar> = (0..self.ring.params.len())
            .map(|i| if i == branch.param { branch.value.clone() } else { Scalar::param(&self.ring.params, i) })
            .collect();
        let mut out = self.map_scalars(|s| s.substitute(&values))?;
        out.ring.constraints.clear();
        out.ring.branches.clear();
        Ok(out)
    }

    /// Every bundle to check symbolically: itself when unconstrained, else one per branch.
    pub fn symbolic_instances(&self) -> Result<Vec<(Option<usize>, AlgebraBundle)>> {
        if !self.ring.is_constrained() {
            return Ok(vec![(None, self.clone())]);
        }
        if self.ring.branches.is_empty() {
            return Err(Error::Invalid(format!(
                "bundle `{}` has constraints but no branches; use sampled mode",
                self.id
            )));
        }
        self.ring.branches.iter().enumerate().map(|(i, b)| Ok((Some(i), self.on_branch(b)?))).collect()
    }
}

/// Stream of the seeded generator reserved for parameter points.
const POINT_STREAM: u64 = 1;

impl AlgebraBundle {
    /// `n` exact parameter points with integer coordinates in [-bound, bound]. Constrained rings
    /// cycle through their branches, solving for the branch parameter; points where a
    /// coefficient has a pole are redrawn.
    pub fn sample_points(&self, n: usize, seed: u64, bound: i64) -> Result<Vec<Vec<Rational>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(POINT_STREAM);
        let np = self.ring.params.len();
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0;
        while out.len() < n {
            attempts += 1;
            if attempts > 1000 * (n + 1) {
                return Err(Error::Invalid(format!("no admissible parameter point found for `{}`", self.id)));
            }
            let mut point: Vec<Rational> =
                (0..np).map(|_| Rational::from_integer(rng.gen_range(-bound..=bound).into())).collect();
            if !self.ring.branches.is_empty() {
                let b = &self.ring.branches[out.len() % self.ring.branches.len()];
                match b.value.eval(&point) {
                    Ok(v) => point[b.param] = v,
                    Err(_) => continue,
                }
            }
            if self.ring.check_point(&point).is_ok() && self.eval_at(&point).is_ok() {
                out.push(point);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_scalar, rat};

    #[test]
    fn constraint_points() {
        let mut ring = Ring::free(&["k1", "k2"]);
        ring.constraints.push(parse_scalar("(k1 - 1)*k2", &ring.params).unwrap());
        assert!(ring.check_point(&[rat(1), rat(5)]).is_ok());
        assert!(matches!(ring.check_point(&[rat(2), rat(5)]), Err(Error::ConstraintViolated(_))));
        assert_eq!(ring.parse_point("k2=5").unwrap(), vec![rat(0), rat(5)]);
        assert!(ring.parse_point("k9=1").is_err());
    }
}
