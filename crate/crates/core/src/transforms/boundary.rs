use crate::geometry::TriangulatedSurface;
use crate::operators::SharedField;
use crate::quaternion::{ComplexQuaternion, PURE_VECTOR_TOL};
use crate::{Error, Result};

/// Values of a quaternion field at the quadrature nodes (triangle
/// centroids) of a surface.
#[derive(Clone)]
pub struct BoundaryField {
    pub values: Vec<ComplexQuaternion>,
    /// Analytic field the values were sampled from, if any.
    pub source: Option<SharedField>,
}

impl std::fmt::Debug for BoundaryField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundaryField")
            .field("nodes", &self.values.len())
            .field("has_source", &self.source.is_some())
            .finish()
    }
}

impl BoundaryField {
    pub fn new(values: Vec<ComplexQuaternion>) -> Self {
        Self { values, source: None }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![ComplexQuaternion::ZERO; n])
    }

    /// Sample `field` at the surface centroids.
    pub fn sample(surface: &TriangulatedSurface, field: SharedField) -> Self {
        let values = surface.centroids().iter().map(|&c| field.eval(c)).collect();
        Self {
            values,
            source: Some(field),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest scalar-part modulus.
    pub fn max_scalar(&self) -> f64 {
        self.values.iter().map(|v| v.scalar().norm()).fold(0.0, f64::max)
    }

    pub fn is_pure_vector(&self) -> bool {
        self.max_scalar() <= PURE_VECTOR_TOL
    }

    pub fn ensure_pure_vector(&self) -> Result<()> {
        let s = self.max_scalar();
        if s <= PURE_VECTOR_TOL {
            Ok(())
        } else {
            Err(Error::NotPureVector { scalar: s })
        }
    }

    /// `max |f|` over the nodes.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_c()).fold(0.0, f64::max)
    }

    pub fn ensure_matches(&self, surface: &TriangulatedSurface) -> Result<()> {
        if self.values.len() == surface.num_triangles() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "boundary field has {} values but the surface has {} nodes",
                self.values.len(),
                surface.num_triangles()
            )))
        }
    }

    /// Pointwise linear combination `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| *x * a + *y * b)
                .collect(),
        )
    }
}
