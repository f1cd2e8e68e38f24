//! Fans presenting smooth complete toric varieties: validation, builtin
//! examples, orbit counts, star subdivision (blow-up at a torus-fixed
//! point), and intersection numbers on surfaces.
//!
//! Fans are normalized on construction — surface rays sorted
//! counterclockwise starting at the positive x-axis, other dimensions
//! lexicographically — so equal fans compare equal structurally and the
//! surface intersection recurrence is well-posed.

use crate::linalg::RatMatrix;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("dimension {0} out of range (0..=3)")]
    BadDimension(usize),
    #[error("ray {0} has wrong length")]
    RayLength(usize),
    #[error("ray {0} is zero")]
    ZeroRay(usize),
    #[error("ray {0} is not primitive")]
    NotPrimitive(usize),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("cone {0} has a bad shape or index")]
    BadCone(usize),
    #[error("not smooth: cone {0} has determinant {1}")]
    NotSmooth(usize, i64),
    #[error("not complete: {0}")]
    NotComplete(String),
    #[error("overlapping cones: {0}")]
    Overlap(String),
    #[error("cone not maximal")]
    ConeNotMaximal,
    #[error("dimension >= 2 required")]
    DimensionTooSmall,
    #[error("line {line}: {msg} at '{token}'")]
    Parse {
        line: usize,
        token: String,
        msg: String,
    },
    #[error("unknown builtin variety '{0}'")]
    UnknownBuiltin(String),
    #[error("surface operation on non-surface fan")]
    NotASurface,
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn det_i64(cols: &[&[i64]]) -> i64 {
    match cols.len() {
        0 => 1,
        1 => cols[0][0],
        2 => cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1],
        3 => {
            let (a, b, c) = (cols[0], cols[1], cols[2]);
            a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1])
                + c[0] * (a[1] * b[2] - a[2] * b[1])
        }
        _ => unreachable!("dimension capped at 3"),
    }
}

/// Counterclockwise comparison for surface rays: split at the x-axis, then
/// compare by exact cross product. The positive x-axis sorts first.
fn ccw_less(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let half = |v: &[i64]| -> u8 {
        if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
            0 // angle in [0, π)
        } else {
            1 // angle in [π, 2π)
        }
    };
    match half(a).cmp(&half(b)) {
        Ordering::Equal => {
            let cross = a[0] * b[1] - a[1] * b[0];
            0.cmp(&cross)
        }
        ord => ord,
    }
}

/// A fan of strongly convex rational cones presenting a smooth complete
/// toric variety of dimension ≤ 3. `max_cones` holds sorted ray-index
/// tuples of length `dim`; all faces are implied (smooth cones are
/// simplicial).
#[derive(Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Fan(dim {}, rays {:?}, cones {:?})",
            self.dim, self.rays, self.max_cones
        )
    }
}

impl Fan {
    /// Builds and validates a fan. Surface rays are re-sorted
    /// counterclockwise, other dimensions lexicographically, and cone
    /// indices follow the rays.
    pub fn new(
        dim: usize,
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        if dim > 3 {
            return Err(FanError::BadDimension(dim));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(FanError::RayLength(i));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(FanError::ZeroRay(i));
            }
            let g = r.iter().fold(0i64, |acc, &x| gcd_i64(acc, x));
            if g != 1 {
                return Err(FanError::NotPrimitive(i));
            }
        }
        for i in 0..rays.len() {
            for j in (i + 1)..rays.len() {
                if rays[i] == rays[j] {
                    return Err(FanError::DuplicateRay(i, j));
                }
            }
        }

        // Normalize ray order and remap cones.
        let mut order: Vec<usize> = (0..rays.len()).collect();
        if dim == 2 {
            order.sort_by(|&a, &b| ccw_less(&rays[a], &rays[b]));
        } else {
            order.sort_by(|&a, &b| rays[a].cmp(&rays[b]));
        }
        let mut inv = vec![0usize; rays.len()];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        let rays: Vec<Vec<i64>> = order.iter().map(|&o| rays[o].clone()).collect();
        let mut cones: Vec<Vec<usize>> = Vec::with_capacity(max_cones.len());
        for (ci, cone) in max_cones.iter().enumerate() {
            if cone.len() != dim {
                return Err(FanError::BadCone(ci));
            }
            let mut c: Vec<usize> = Vec::with_capacity(dim);
            for &ri in cone {
                if ri >= rays.len() {
                    return Err(FanError::BadCone(ci));
                }
                c.push(inv[ri]);
            }
            c.sort_unstable();
            c.dedup();
            if c.len() != dim {
                return Err(FanError::BadCone(ci));
            }
            cones.push(c);
        }
        cones.sort();
        cones.dedup();

        let fan = Fan {
            dim,
            rays,
            max_cones: cones,
        };
        fan.validate()?;
        Ok(fan)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Confirms smoothness and completeness; diagnostics name the failing
    /// cone or ray. Runs automatically in [`Fan::new`].
    pub fn validate(&self) -> Result<(), FanError> {
        match self.dim {
            0 => {
                if self.rays.is_empty() && self.max_cones == vec![Vec::<usize>::new()] {
                    Ok(())
                } else {
                    Err(FanError::NotComplete(
                        "a point needs exactly the zero cone".into(),
                    ))
                }
            }
            1 => {
                if self.rays == vec![vec![-1], vec![1]] && self.max_cones == vec![vec![0], vec![1]]
                {
                    Ok(())
                } else {
                    Err(FanError::NotComplete(
                        "a complete 1-dim fan has rays 1 and -1".into(),
                    ))
                }
            }
            2 => self.validate_surface(),
            3 => self.validate_threefold(),
            d => Err(FanError::BadDimension(d)),
        }
    }

    fn cone_det(&self, cone: &[usize]) -> i64 {
        let cols: Vec<&[i64]> = cone.iter().map(|&i| self.rays[i].as_slice()).collect();
        det_i64(&cols)
    }

    fn validate_surface(&self) -> Result<(), FanError> {
        let r = self.rays.len();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            let d = self.cone_det(cone);
            if d.abs() != 1 {
                return Err(FanError::NotSmooth(ci, d));
            }
        }
        if r < 3 {
            return Err(FanError::NotComplete("fewer than 3 rays".into()));
        }
        // Rays are CCW-sorted; completeness means the max cones are exactly
        // the consecutive pairs, and each consecutive gap is < π, which for
        // smooth cones reads det(vᵢ, vᵢ₊₁) = +1.
        let mut expected: Vec<Vec<usize>> = (0..r)
            .map(|i| {
                let mut c = vec![i, (i + 1) % r];
                c.sort_unstable();
                c
            })
            .collect();
        expected.sort();
        if self.max_cones != expected {
            for i in 0..r {
                let count = self.max_cones.iter().filter(|c| c.contains(&i)).count();
                if count != 2 {
                    return Err(FanError::NotComplete(format!(
                        "ray {i} lies in {count} maximal cones"
                    )));
                }
            }
            return Err(FanError::Overlap(
                "maximal cones are not the consecutive ray pairs".into(),
            ));
        }
        for i in 0..r {
            let j = (i + 1) % r;
            let d = det_i64(&[&self.rays[i], &self.rays[j]]);
            if d != 1 {
                return Err(FanError::NotComplete(format!(
                    "consecutive rays {i},{j} span determinant {d}"
                )));
            }
        }
        Ok(())
    }

    fn validate_threefold(&self) -> Result<(), FanError> {
        for (ci, cone) in self.max_cones.iter().enumerate() {
            let d = self.cone_det(cone);
            if d.abs() != 1 {
                return Err(FanError::NotSmooth(ci, d));
            }
        }
        // Every 2-face must be shared by exactly two maximal cones lying on
        // opposite sides of its plane.
        let mut facets: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for skip in 0..3 {
                let facet: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                facets.entry(facet).or_default().push(ci);
            }
        }
        for (facet, owners) in &facets {
            if owners.len() != 2 {
                return Err(FanError::NotComplete(format!(
                    "facet {facet:?} lies in {} maximal cones",
                    owners.len()
                )));
            }
            let (a, b) = (&self.rays[facet[0]], &self.rays[facet[1]]);
            let normal = [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ];
            let side = |ci: usize| -> i64 {
                let cone = &self.max_cones[ci];
                let apex = cone.iter().find(|v| !facet.contains(v)).expect("third ray");
                let v = &self.rays[*apex];
                normal[0] * v[0] + normal[1] * v[1] + normal[2] * v[2]
            };
            let (s0, s1) = (side(owners[0]), side(owners[1]));
            if s0 == 0 || s1 == 0 || (s0 > 0) == (s1 > 0) {
                return Err(FanError::Overlap(format!(
                    "cones on the same side of facet {facet:?}"
                )));
            }
        }
        // Support check: fixed generic directions must all be covered.
        for g in [
            [1i64, 1, 1],
            [-1, 1, 1],
            [1, -1, 1],
            [1, 1, -1],
            [-1, -1, -1],
            [2, 3, 5],
            [-5, 3, -2],
        ] {
            if !self.max_cones.iter().any(|cone| self.cone_contains(cone, &g)) {
                return Err(FanError::NotComplete(format!(
                    "direction {g:?} is not covered"
                )));
            }
        }
        Ok(())
    }

    /// Membership of an integer vector in the cone spanned by `cone`'s rays.
    pub fn cone_contains(&self, cone: &[usize], v: &[i64]) -> bool {
        let basis = self.chart_basis(cone);
        basis.iter().all(|m| {
            let pairing: i64 = m.iter().zip(v).map(|(a, b)| a * b).sum();
            pairing >= 0
        })
    }

    /// The dual basis m₁…m_d of a smooth cone: integer row vectors with
    /// ⟨mᵢ, vⱼ⟩ = δᵢⱼ. These are the chart coordinates of the cone.
    pub fn chart_basis(&self, cone: &[usize]) -> Vec<Vec<i64>> {
        match self.dim {
            0 => Vec::new(),
            1 => {
                let v = &self.rays[cone[0]];
                vec![vec![v[0]]] // v = ±1 is self-inverse
            }
            2 => {
                let (a, b) = (&self.rays[cone[0]], &self.rays[cone[1]]);
                let det = det_i64(&[a, b]);
                debug_assert!(det.abs() == 1);
                vec![vec![b[1] / det, -b[0] / det], vec![-a[1] / det, a[0] / det]]
            }
            3 => {
                let (a, b, c) = (
                    &self.rays[cone[0]],
                    &self.rays[cone[1]],
                    &self.rays[cone[2]],
                );
                let det = det_i64(&[a, b, c]);
                debug_assert!(det.abs() == 1);
                let cross = |u: &[i64], v: &[i64]| -> Vec<i64> {
                    vec![
                        u[1] * v[2] - u[2] * v[1],
                        u[2] * v[0] - u[0] * v[2],
                        u[0] * v[1] - u[1] * v[0],
                    ]
                };
                let rows = [cross(b, c), cross(c, a), cross(a, b)];
                rows.iter()
                    .map(|r| r.iter().map(|&x| x / det).collect())
                    .collect()
            }
            _ => unreachable!(),
        }
    }

    /// Number of cones of each dimension 0..=dim, the zero cone included.
    pub fn orbit_counts(&self) -> Vec<usize> {
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        faces.insert(Vec::new());
        for cone in &self.max_cones {
            let k = cone.len();
            for mask in 1u32..(1 << k) {
                let face: Vec<usize> = (0..k)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| cone[i])
                    .collect();
                faces.insert(face);
            }
        }
        let mut counts = vec![0usize; self.dim + 1];
        for f in faces {
            counts[f.len()] += 1;
        }
        counts
    }

    /// Surface intersection matrix Dᵢ·Dⱼ of the torus-invariant divisors:
    /// adjacent rays pair to 1, non-adjacent to 0, and Dᵢ² = −aᵢ where
    /// vᵢ₋₁ + vᵢ₊₁ = aᵢ·vᵢ.
    pub fn surface_intersection_matrix(&self) -> Result<Vec<Vec<i64>>, FanError> {
        if self.dim != 2 {
            return Err(FanError::NotASurface);
        }
        let r = self.rays.len();
        let mut m = vec![vec![0i64; r]; r];
        for i in 0..r {
            let prev = &self.rays[(i + r - 1) % r];
            let next = &self.rays[(i + 1) % r];
            let v = &self.rays[i];
            let sum = [prev[0] + next[0], prev[1] + next[1]];
            let k = if v[0] != 0 { 0 } else { 1 };
            debug_assert!(sum[k] % v[k] == 0);
            let a = sum[k] / v[k];
            debug_assert_eq!(sum[0], a * v[0]);
            debug_assert_eq!(sum[1], a * v[1]);
            m[i][i] = -a;
            m[i][(i + 1) % r] = 1;
            m[(i + 1) % r][i] = 1;
        }
        Ok(m)
    }

    /// Intersection matrix as an exact rational matrix.
    pub fn surface_intersection_rat(&self) -> Result<RatMatrix, FanError> {
        let m = self.surface_intersection_matrix()?;
        let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
        Ok(RatMatrix::from_int_rows(&rows))
    }

    /// Builtin fans: `pt`, `P1`, `P2`, `P3`, `P1xP1`, `hirzebruch:a`.
    /// `hirzebruch:1` equals, as a set of cones, the star subdivision of the
    /// projective plane at its first maximal cone.
    pub fn builtin(name: &str) -> Result<Fan, FanError> {
        match name {
            "pt" => Fan::new(0, Vec::new(), vec![Vec::new()]),
            "P1" => Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]),
            "P2" => Fan::new(
                2,
                vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
                vec![vec![0, 1], vec![1, 2], vec![2, 0]],
            ),
            "P3" => Fan::new(
                3,
                vec![
                    vec![1, 0, 0],
                    vec![0, 1, 0],
                    vec![0, 0, 1],
                    vec![-1, -1, -1],
                ],
                vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
            ),
            "P1xP1" => Fan::new(
                2,
                vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
                vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
            ),
            _ => {
                if let Some(a) = name.strip_prefix("hirzebruch:") {
                    let a: i64 = a
                        .parse()
                        .map_err(|_| FanError::UnknownBuiltin(name.to_string()))?;
                    if a < 0 {
                        return Err(FanError::UnknownBuiltin(name.to_string()));
                    }
                    // Sheared presentation, pinned so that a = 1 reproduces
                    // the star subdivision of P2 at cone {0,1} on the nose.
                    Fan::new(
                        2,
                        vec![vec![1, 0], vec![1, 1], vec![a - 1, a], vec![-1, -1]],
                        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
                    )
                } else {
                    Err(FanError::UnknownBuiltin(name.to_string()))
                }
            }
        }
    }

    /// Serializes to the fan text format (`dim` / `rays:` / `cones:` lines).
    pub fn to_text(&self) -> String {
        let rays = self
            .rays
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ");
        let cones = self
            .max_cones
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ");
        format!("dim {}\nrays: {}\ncones: {}\n", self.dim, rays, cones)
    }

    /// Parses the fan text format. Errors cite the line and token.
    pub fn parse(text: &str) -> Result<Fan, FanError> {
        let mut dim: Option<usize> = None;
        let mut rays: Vec<Vec<i64>> = Vec::new();
        let mut cones: Vec<Vec<usize>> = Vec::new();
        let mut saw_rays = false;
        let mut saw_cones = false;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let s = raw.trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix("dim") {
                let tok = rest.trim();
                dim = Some(tok.parse().map_err(|_| FanError::Parse {
                    line,
                    token: tok.to_string(),
                    msg: "bad dimension".into(),
                })?);
            } else if let Some(rest) = s.strip_prefix("rays:") {
                saw_rays = true;
                for chunk in rest.split(';') {
                    let chunk = chunk.trim();
                    if chunk.is_empty() {
                        continue;
                    }
                    let mut v = Vec::new();
                    for tok in chunk.split_whitespace() {
                        v.push(tok.parse().map_err(|_| FanError::Parse {
                            line,
                            token: tok.to_string(),
                            msg: "bad integer".into(),
                        })?);
                    }
                    rays.push(v);
                }
            } else if let Some(rest) = s.strip_prefix("cones:") {
                saw_cones = true;
                for chunk in rest.split(';') {
                    let chunk = chunk.trim();
                    if chunk.is_empty() {
                        continue;
                    }
                    let mut v = Vec::new();
                    for tok in chunk.split_whitespace() {
                        v.push(tok.parse().map_err(|_| FanError::Parse {
                            line,
                            token: tok.to_string(),
                            msg: "bad ray index".into(),
                        })?);
                    }
                    cones.push(v);
                }
            } else {
                return Err(FanError::Parse {
                    line,
                    token: s.split_whitespace().next().unwrap_or("").to_string(),
                    msg: "expected 'dim', 'rays:' or 'cones:'".into(),
                });
            }
        }
        let dim = dim.ok_or(FanError::Parse {
            line: 1,
            token: String::new(),
            msg: "missing 'dim' line".into(),
        })?;
        if !saw_rays || !saw_cones {
            return Err(FanError::Parse {
                line: 1,
                token: String::new(),
                msg: "missing 'rays:' or 'cones:' line".into(),
            });
        }
        if dim == 0 {
            // the unique zero cone is implicit for a point
            return Fan::new(0, Vec::new(), vec![Vec::new()]);
        }
        Fan::new(dim, rays, cones)
    }
}

/// A torus-invariant divisor Σ aᵨ·Dᵨ, one coefficient per ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDivisor(pub Vec<i64>);

impl ToricDivisor {
    /// The divisor with coefficient 1 on a single ray.
    pub fn ray(fan: &Fan, index: usize) -> ToricDivisor {
        let mut c = vec![0i64; fan.rays().len()];
        c[index] = 1;
        ToricDivisor(c)
    }

    pub fn scaled(&self, k: i64) -> ToricDivisor {
        ToricDivisor(self.0.iter().map(|&x| k * x).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// A refinement of fans with the identity lattice map, tracking which target
/// maximal cone contains each source maximal cone. Produced by
/// [`star_subdivision`]; drives sheaf pullback.
#[derive(Debug, Clone)]
pub struct ToricMorphism {
    pub source: Fan,
    pub target: Fan,
    /// `cone_map[i]` is the target max cone containing source max cone `i`.
    pub cone_map: Vec<usize>,
}

impl ToricMorphism {
    pub fn identity(fan: &Fan) -> ToricMorphism {
        ToricMorphism {
            source: fan.clone(),
            target: fan.clone(),
            cone_map: (0..fan.max_cones().len()).collect(),
        }
    }

    pub fn verify(&self) -> Result<(), FanError> {
        for (si, &ti) in self.cone_map.iter().enumerate() {
            let scone = &self.source.max_cones()[si];
            let tcone = &self.target.max_cones()[ti];
            for &ri in scone {
                if !self.target.cone_contains(tcone, &self.source.rays()[ri]) {
                    return Err(FanError::Overlap(format!(
                        "source cone {si} not contained in target cone {ti}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Star subdivision of a maximal cone: inserts the ray sum as a new ray and
/// replaces the cone by `dim` cones through it. This is the fan of the
/// blow-up at the torus-fixed point of that cone.
pub fn star_subdivision(fan: &Fan, cone: &[usize]) -> Result<(Fan, ToricMorphism), FanError> {
    if fan.dim() < 2 {
        return Err(FanError::DimensionTooSmall);
    }
    let mut key: Vec<usize> = cone.to_vec();
    key.sort_unstable();
    let target_idx = fan
        .max_cones()
        .iter()
        .position(|c| c == &key)
        .ok_or(FanError::ConeNotMaximal)?;

    let mut new_ray = vec![0i64; fan.dim()];
    for &ri in &key {
        for (k, x) in fan.rays()[ri].iter().enumerate() {
            new_ray[k] += x;
        }
    }
    let mut rays = fan.rays().to_vec();
    let new_index = rays.len();
    rays.push(new_ray);

    let mut cones: Vec<Vec<usize>> = fan
        .max_cones()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != target_idx)
        .map(|(_, c)| c.clone())
        .collect();
    for skip in 0..key.len() {
        let mut c: Vec<usize> = key
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &v)| v)
            .collect();
        c.push(new_index);
        cones.push(c);
    }
    let source = Fan::new(fan.dim(), rays, cones)?;

    let mut cone_map = Vec::with_capacity(source.max_cones().len());
    for scone in source.max_cones() {
        let ti = fan
            .max_cones()
            .iter()
            .position(|tcone| {
                scone
                    .iter()
                    .all(|&ri| fan.cone_contains(tcone, &source.rays()[ri]))
            })
            .expect("every subdivided cone lies in an original cone");
        cone_map.push(ti);
    }
    let morphism = ToricMorphism {
        source: source.clone(),
        target: fan.clone(),
        cone_map,
    };
    morphism.verify()?;
    Ok((source, morphism))
}
