use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Domain, DomainKind, ExtReal, Point, SampleCloud};

pub type EvalFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
pub type SubgradientFn = Arc<dyn Fn(&Point) -> Point + Send + Sync>;

/// A function `R^n -> (-inf, +inf]` that is finite exactly on a compact domain.
///
/// The wrapped closure is only ever called on in-domain points. Objectives are
/// immutable and cheap to clone.
#[derive(Clone)]
pub struct Objective {
    id: String,
    dimension: usize,
    eval: EvalFn,
    domain: Domain,
    lipschitz_k: f64,
    known_minimizer: Option<Point>,
    known_min_value: Option<f64>,
    subgradient_hint: Option<SubgradientFn>,
    preconditions_verified: bool,
}

impl Objective {
    pub fn new<F>(id: impl Into<String>, domain: Domain, lipschitz_k: f64, f: F) -> Result<Self>
    where
        F: Fn(&Point) -> f64 + Send + Sync + 'static,
    {
        if !(lipschitz_k > 0.0 && lipschitz_k.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "lipschitz constant must be positive, got {lipschitz_k}"
            )));
        }
        Ok(Objective {
            id: id.into(),
            dimension: domain.dim(),
            eval: Arc::new(f),
            domain,
            lipschitz_k,
            known_minimizer: None,
            known_min_value: None,
            subgradient_hint: None,
            preconditions_verified: false,
        })
    }

    pub fn with_minimizer(mut self, x: Point, value: f64) -> Result<Self> {
        x.check_dim(self.dimension)?;
        let at = self.evaluate(&x)?;
        if at.value().is_none_or(|v| (v - value).abs() > 1e-12) {
            return Err(Error::InvalidInput(format!(
                "declared minimum {value} disagrees with f(x*) = {at}"
            )));
        }
        self.known_minimizer = Some(x);
        self.known_min_value = Some(value);
        Ok(self)
    }

    pub fn with_subgradient<G>(mut self, g: G) -> Self
    where
        G: Fn(&Point) -> Point + Send + Sync + 'static,
    {
        self.subgradient_hint = Some(Arc::new(g));
        self
    }

    /// Marks the objective as meeting the descent hypotheses: Lipschitz on a
    /// compact domain, lower semicontinuous, unique minimizer.
    pub fn with_preconditions_verified(mut self, yes: bool) -> Self {
        self.preconditions_verified = yes;
        self
    }

    /// Cloud-backed objective.
    ///
    /// Values at stored samples are returned exactly. Elsewhere in the cloud's
    /// hull the McShane extension `min_i f_i + K |x - x_i|` is used with `K`
    /// the empirical Lipschitz constant, so the result stays `K`-Lipschitz.
    pub fn from_cloud(id: impl Into<String>, cloud: &SampleCloud) -> Result<Self> {
        let k = if cloud.len() >= 2 {
            cloud.empirical_lipschitz()?
        } else {
            0.0
        };
        let domain = Domain::new(DomainKind::Hull {
            vertices: cloud.points().to_vec(),
        })?;
        let pts = cloud.points().to_vec();
        let vals = cloud.values().to_vec();
        let f = move |x: &Point| {
            pts.iter()
                .zip(&vals)
                .map(|(p, v)| {
                    let d = p.dist(x);
                    if d == 0.0 {
                        *v
                    } else {
                        v + k * d
                    }
                })
                .fold(f64::INFINITY, f64::min)
        };
        let mut obj = Objective::new(id, domain, k.max(f64::MIN_POSITIVE), f)?;
        if let Some((i, _)) = cloud.unique_argmin(1e-12) {
            obj = obj.with_minimizer(cloud.point(i).clone(), cloud.value(i))?;
        }
        Ok(obj)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn lipschitz_k(&self) -> f64 {
        self.lipschitz_k
    }

    pub fn known_minimizer(&self) -> Option<&Point> {
        self.known_minimizer.as_ref()
    }

    pub fn known_min_value(&self) -> Option<f64> {
        self.known_min_value
    }

    pub fn preconditions_verified(&self) -> bool {
        self.preconditions_verified
    }

    /// `f(x)`, `+inf` outside the domain.
    pub fn evaluate(&self, x: &Point) -> Result<ExtReal> {
        x.check_dim(self.dimension)?;
        if !self.domain.contains(x) {
            return Ok(ExtReal::INFINITY);
        }
        ExtReal::new((self.eval)(x))
    }

    /// Subgradient from the hint, if one was supplied and `x` is in the domain.
    pub fn subgradient(&self, x: &Point) -> Option<Point> {
        let g = self.subgradient_hint.as_ref()?;
        self.domain.contains(x).then(|| g(x))
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("id", &self.id)
            .field("dimension", &self.dimension)
            .field("domain", &self.domain)
            .field("lipschitz_k", &self.lipschitz_k)
            .field("known_minimizer", &self.known_minimizer)
            .field("known_min_value", &self.known_min_value)
            .finish_non_exhaustive()
    }
}
