//! Training and test data: evaluation points with measured responses and
//! optional tangential directions.

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{c64, cx, fro};
use crate::model::EvalPoint;

/// Tolerance used when matching `σ` with its conjugate partner.
pub const PAIRING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub points: Vec<EvalPoint>,
    pub responses: Vec<Mat<c64>>,
    pub right_dirs: Option<Vec<Vec<c64>>>,
    pub left_dirs: Option<Vec<Vec<c64>>>,
    pub conjugate_closed: bool,
}

impl SampleSet {
    /// Builds a sample set without tangential directions.
    pub fn new(points: Vec<EvalPoint>, responses: Vec<Mat<c64>>, conjugate_closed: bool) -> Result<Self> {
        Self::with_directions(points, responses, None, None, conjugate_closed)
    }

    /// Builds a sample set; directions are normalized to unit 2-norm.
    pub fn with_directions(
        points: Vec<EvalPoint>,
        responses: Vec<Mat<c64>>,
        right_dirs: Option<Vec<Vec<c64>>>,
        left_dirs: Option<Vec<Vec<c64>>>,
        conjugate_closed: bool,
    ) -> Result<Self> {
        let normalize = |dirs: Option<Vec<Vec<c64>>>| -> Result<Option<Vec<Vec<c64>>>> {
            dirs.map(|ds| ds.into_iter().map(unit_vector).collect()).transpose()
        };
        let set = SampleSet {
            points,
            responses,
            right_dirs: normalize(right_dirs)?,
            left_dirs: normalize(left_dirs)?,
            conjugate_closed,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.points.len();
        if n == 0 {
            return Err(Error::InvalidArgument("sample set is empty".into()));
        }
        if self.responses.len() != n {
            return Err(Error::Dimension(format!("{n} points but {} responses", self.responses.len())));
        }
        let (l, m) = (self.responses[0].nrows(), self.responses[0].ncols());
        if l == 0 || m == 0 {
            return Err(Error::Dimension("responses must be nonempty".into()));
        }
        for (j, h) in self.responses.iter().enumerate() {
            if h.nrows() != l || h.ncols() != m {
                return Err(Error::Dimension(format!("response {j} is {}x{}, expected {l}x{m}", h.nrows(), h.ncols())));
            }
        }
        match (&self.right_dirs, &self.left_dirs) {
            (None, None) => {}
            (Some(b), Some(c)) => {
                if b.len() != n || c.len() != n {
                    return Err(Error::Dimension("direction lists must have one entry per sample".into()));
                }
                if b.iter().any(|v| v.len() != m) || c.iter().any(|v| v.len() != l) {
                    return Err(Error::Dimension(format!("directions must have lengths m={m} (right) and l={l} (left)")));
                }
            }
            _ => return Err(Error::InvalidArgument("right and left directions must be given together".into())),
        }
        if self.conjugate_closed {
            self.conjugate_pairing()?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn outputs(&self) -> usize {
        self.responses[0].nrows()
    }

    pub fn inputs(&self) -> usize {
        self.responses[0].ncols()
    }

    pub fn is_siso(&self) -> bool {
        self.outputs() == 1 && self.inputs() == 1
    }

    pub fn has_directions(&self) -> bool {
        self.right_dirs.is_some()
    }

    /// For each sample, the index of its conjugate partner (itself for real points).
    pub fn conjugate_pairing(&self) -> Result<Vec<usize>> {
        let mut partner = vec![usize::MAX; self.len()];
        for j in 0..self.len() {
            let target = self.points[j].conj();
            let scale = 1.0 + target.magnitude();
            let k = (0..self.len())
                .filter(|&k| self.points[k].distance(&target) <= PAIRING_TOL * scale)
                .min_by(|&a, &b| self.points[a].distance(&target).total_cmp(&self.points[b].distance(&target)))
                .ok_or_else(|| Error::ConjugatePairing(format!("no conjugate partner for sample {j} ({})", self.points[j])))?;
            partner[j] = k;
        }
        for j in 0..self.len() {
            if partner[partner[j]] != j {
                return Err(Error::ConjugatePairing(format!("pairing of sample {j} is not symmetric")));
            }
            let h = &self.responses[j];
            let hbar = self.responses[partner[j]].conjugate().to_owned();
            if fro((h - &hbar).as_ref()) > 1e-12 * fro(h.as_ref()).max(1e-300) {
                return Err(Error::ConjugatePairing(format!("H at sample {j} is not the conjugate of its partner")));
            }
        }
        Ok(partner)
    }

    /// Assigns tangential directions by cycling through canonical unit vectors.
    pub fn with_canonical_directions(mut self) -> Self {
        let (l, m) = (self.outputs(), self.inputs());
        let unit = |len: usize, k: usize| {
            let mut v = vec![cx(0.0, 0.0); len];
            v[k % len] = cx(1.0, 0.0);
            v
        };
        self.right_dirs = Some((0..self.len()).map(|j| unit(m, j)).collect());
        self.left_dirs = Some((0..self.len()).map(|j| unit(l, j)).collect());
        self
    }

    /// Assigns seeded random unit directions (real Gaussian, normalized).
    /// Conjugate partners share the same real directions.
    pub fn with_random_directions(mut self, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, m) = (self.outputs(), self.inputs());
        let partner = if self.conjugate_closed { Some(self.conjugate_pairing()?) } else { None };
        let mut draw = |len: usize| -> Result<Vec<c64>> {
            let v: Vec<c64> = (0..len).map(|_| cx(StandardNormal.sample(&mut rng), 0.0)).collect();
            unit_vector(v)
        };
        let mut right = vec![Vec::new(); self.len()];
        let mut left = vec![Vec::new(); self.len()];
        for j in 0..self.len() {
            let source = partner.as_ref().map_or(j, |p| p[j].min(j));
            if source < j {
                right[j] = right[source].clone();
                left[j] = left[source].clone();
            } else {
                right[j] = draw(m)?;
                left[j] = draw(l)?;
            }
        }
        self.right_dirs = Some(right);
        self.left_dirs = Some(left);
        Ok(self)
    }

    pub fn subset(&self, indices: &[usize]) -> Result<SampleSet> {
        let pick = |v: &Option<Vec<Vec<c64>>>| v.as_ref().map(|d| indices.iter().map(|&i| d[i].clone()).collect());
        SampleSet::with_directions(
            indices.iter().map(|&i| self.points[i].clone()).collect(),
            indices.iter().map(|&i| self.responses[i].clone()).collect(),
            pick(&self.right_dirs),
            pick(&self.left_dirs),
            false,
        )
    }

    /// Largest entry modulus over all responses.
    pub fn max_abs(&self) -> f64 {
        self.responses
            .iter()
            .flat_map(|h| (0..h.nrows()).flat_map(move |i| (0..h.ncols()).map(move |j| h[(i, j)].norm())))
            .fold(0.0, f64::max)
    }
}

fn unit_vector(v: Vec<c64>) -> Result<Vec<c64>> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidArgument("tangential direction must be nonzero".into()));
    }
    // Already unit vectors are kept bit-for-bit so that stored sets reload unchanged.
    if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Ok(v);
    }
    Ok(v.into_iter().map(|z| z / norm).collect())
}

/// Divides all responses by their largest entry modulus. Returns the scaled set and the factor.
pub fn normalize(samples: &SampleSet) -> Result<(SampleSet, f64)> {
    let scale = samples.max_abs();
    if !(scale > 0.0) {
        return Err(Error::InvalidArgument("cannot normalize all-zero responses".into()));
    }
    Ok((rescale(samples, 1.0 / scale), scale))
}

/// Inverse of [`normalize`].
pub fn denormalize(samples: &SampleSet, scale: f64) -> SampleSet {
    let mut out = samples.clone();
    for h in &mut out.responses {
        *h = Mat::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)] * scale);
    }
    out
}

fn rescale(samples: &SampleSet, factor: f64) -> SampleSet {
    let mut out = samples.clone();
    for h in &mut out.responses {
        *h = Mat::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)] * factor);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(z: c64) -> Mat<c64> {
        Mat::from_fn(1, 1, |_, _| z)
    }

    #[test]
    fn rejects_inconsistent_sets() {
        assert!(SampleSet::new(vec![], vec![], false).is_err());
        let pts = vec![EvalPoint::imag(1.0), EvalPoint::imag(2.0)];
        let bad = SampleSet::new(pts.clone(), vec![scalar(cx(1.0, 0.0)), Mat::zeros(2, 1)], false);
        assert!(matches!(bad, Err(Error::Dimension(_))));
        let one_sided = SampleSet::with_directions(
            pts.clone(),
            vec![scalar(cx(1.0, 0.0)); 2],
            Some(vec![vec![cx(1.0, 0.0)]; 2]),
            None,
            false,
        );
        assert!(one_sided.is_err());
    }

    #[test]
    fn directions_are_normalized() {
        let pts = vec![EvalPoint::imag(1.0)];
        let set = SampleSet::with_directions(
            pts,
            vec![Mat::zeros(2, 2)],
            Some(vec![vec![cx(3.0, 0.0), cx(0.0, 4.0)]]),
            Some(vec![vec![cx(0.0, 2.0), cx(0.0, 0.0)]]),
            false,
        )
        .unwrap();
        let b = &set.right_dirs.as_ref().unwrap()[0];
        assert!((b[0] - cx(0.6, 0.0)).norm() < 1e-15 && (b[1] - cx(0.0, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn conjugate_closure_is_checked() {
        let z = cx(0.3, -0.2);
        let pts = vec![EvalPoint::imag(1.0), EvalPoint::imag(-1.0)];
        let ok = SampleSet::new(pts.clone(), vec![scalar(z), scalar(z.conj())], true).unwrap();
        assert_eq!(ok.conjugate_pairing().unwrap(), vec![1, 0]);
        assert!(SampleSet::new(pts.clone(), vec![scalar(z), scalar(z)], true).is_err());
        let lonely = SampleSet::new(vec![EvalPoint::imag(1.0)], vec![scalar(z)], true);
        assert!(matches!(lonely, Err(Error::ConjugatePairing(_))));
    }

    #[test]
    fn canonical_directions_cycle() {
        let pts: Vec<_> = (1..=5).map(|k| EvalPoint::imag(k as f64)).collect();
        let set = SampleSet::new(pts, vec![Mat::zeros(3, 2); 5], false).unwrap().with_canonical_directions();
        let b = set.right_dirs.as_ref().unwrap();
        let c = set.left_dirs.as_ref().unwrap();
        assert_eq!(b[2][0], cx(1.0, 0.0));
        assert_eq!(b[3][1], cx(1.0, 0.0));
        assert_eq!(c[4][1], cx(1.0, 0.0));
        assert_eq!(c[3][0], cx(1.0, 0.0));
    }

    #[test]
    fn normalization_round_trip() {
        let pts = vec![EvalPoint::imag(1.0), EvalPoint::imag(2.0)];
        let set = SampleSet::new(pts, vec![scalar(cx(3e-7, 1e-7)), scalar(cx(-2e-8, 5e-7))], false).unwrap();
        let (norm, scale) = normalize(&set).unwrap();
        assert!((norm.max_abs() - 1.0).abs() < 1e-15);
        let back = denormalize(&norm, scale);
        for (a, b) in back.responses.iter().zip(&set.responses) {
            assert!((a[(0, 0)] - b[(0, 0)]).norm() <= 1e-15 * b[(0, 0)].norm());
        }
    }
}
