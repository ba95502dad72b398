//! The three bodies, their face lattices, directions and regime detection.

use core::cmp::Ordering;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SliceError};
use crate::scalar::{factorial, norm, Scalar};

/// Absolute tolerance for deciding that a vertex lies on the hyperplane.
pub const TIE_TOL: f64 = 1e-12;

/// Cube vertex enumeration is exponential; this is the largest `n` for which
/// routines that list every vertex will run.
pub const MAX_ENUMERATED_DIM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BodyKind {
    Simplex,
    CrossPolytope,
    Cube,
}

impl BodyKind {
    pub fn name(self) -> &'static str {
        match self {
            BodyKind::Simplex => "simplex",
            BodyKind::CrossPolytope => "crosspolytope",
            BodyKind::Cube => "cube",
        }
    }
}

impl core::str::FromStr for BodyKind {
    type Err = String;
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "simplex" => Ok(BodyKind::Simplex),
            "crosspolytope" | "cross-polytope" | "xpoly" => Ok(BodyKind::CrossPolytope),
            "cube" => Ok(BodyKind::Cube),
            other => Err(format!("unknown body `{other}`")),
        }
    }
}

/// Regular simplex `Δⁿ ⊂ {Σx = 1} ⊂ ℝⁿ⁺¹`, cross-polytope `B(ℓ₁ⁿ)`, or cube `[-1/2, 1/2]ⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Body {
    pub kind: BodyKind,
    pub n: usize,
}

impl Body {
    pub fn new(kind: BodyKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(SliceError::DimensionTooSmall(n));
        }
        Ok(Body { kind, n })
    }

    /// Panics if `n < 2`.
    pub fn simplex(n: usize) -> Self {
        Self::new(BodyKind::Simplex, n).expect("n >= 2")
    }

    /// Panics if `n < 2`.
    pub fn cross_polytope(n: usize) -> Self {
        Self::new(BodyKind::CrossPolytope, n).expect("n >= 2")
    }

    /// Panics if `n < 2`.
    pub fn cube(n: usize) -> Self {
        Self::new(BodyKind::Cube, n).expect("n >= 2")
    }

    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            BodyKind::Simplex => self.n + 1,
            _ => self.n,
        }
    }

    pub fn volume<T: Scalar>(&self) -> T {
        let n = self.n;
        match self.kind {
            BodyKind::Simplex => T::of_usize(n + 1).sqrt() / factorial(n),
            BodyKind::CrossPolytope => T::lit(2.0).powi(n as i32) / factorial(n),
            BodyKind::Cube => T::one(),
        }
    }

    /// Largest `⟨a, v⟩` over unit directions and vertices: the distance from
    /// the centre to a vertex.
    pub fn circumradius<T: Scalar>(&self) -> T {
        let n = T::of_usize(self.n);
        match self.kind {
            BodyKind::Simplex => (n / (n + T::one())).sqrt(),
            BodyKind::CrossPolytope => T::one(),
            BodyKind::Cube => n.sqrt() / T::lit(2.0),
        }
    }

    /// Distance `d(n)` from the centre to the midpoint of an edge.
    pub fn edge_midpoint_distance<T: Scalar>(&self) -> T {
        let n = T::of_usize(self.n);
        let one = T::one();
        match self.kind {
            BodyKind::Simplex => ((n - one) / (T::lit(2.0) * (n + one))).sqrt(),
            BodyKind::CrossPolytope => T::FRAC_1_SQRT_2(),
            BodyKind::Cube => (n - one).sqrt() / T::lit(2.0),
        }
    }

    pub fn diameter<T: Scalar>(&self) -> T {
        match self.kind {
            BodyKind::Simplex => T::SQRT_2(),
            BodyKind::CrossPolytope => T::lit(2.0),
            BodyKind::Cube => T::of_usize(self.n).sqrt(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self.kind {
            BodyKind::Simplex => self.n + 1,
            BodyKind::CrossPolytope => 2 * self.n,
            BodyKind::Cube => 1usize << self.n,
        }
    }

    /// Coordinates of vertex `id`.
    ///
    /// Ids: simplex `j` is `e_j`; cross-polytope `2j` is `e_j` and `2j+1` is
    /// `-e_j`; cube bit `i` of the id set means coordinate `i` is `+1/2`.
    pub fn vertex<T: Scalar>(&self, id: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.ambient_dim()];
        match self.kind {
            BodyKind::Simplex => v[id] = T::one(),
            BodyKind::CrossPolytope => v[id / 2] = if id % 2 == 0 { T::one() } else { -T::one() },
            BodyKind::Cube => {
                let h = T::lit(0.5);
                for (i, x) in v.iter_mut().enumerate() {
                    *x = if id >> i & 1 == 1 { h } else { -h };
                }
            }
        }
        v
    }

    /// `⟨a, v⟩` for vertex `id` without materialising the vertex.
    pub fn vertex_dot<T: Scalar>(&self, a: &[T], id: usize) -> T {
        match self.kind {
            BodyKind::Simplex => a[id],
            BodyKind::CrossPolytope => {
                if id % 2 == 0 {
                    a[id / 2]
                } else {
                    -a[id / 2]
                }
            }
            BodyKind::Cube => {
                let h = T::lit(0.5);
                a.iter()
                    .enumerate()
                    .map(|(i, &x)| if id >> i & 1 == 1 { h * x } else { -h * x })
                    .sum()
            }
        }
    }

    pub fn vertices<T: Scalar>(&self) -> Result<Vec<Vec<T>>> {
        if self.kind == BodyKind::Cube && self.n > MAX_ENUMERATED_DIM {
            return Err(SliceError::ResourceLimit("cube vertex enumeration"));
        }
        Ok((0..self.vertex_count()).map(|id| self.vertex(id)).collect())
    }

    pub fn adjacent(&self, u: usize, w: usize) -> bool {
        if u == w {
            return false;
        }
        match self.kind {
            BodyKind::Simplex => true,
            BodyKind::CrossPolytope => u / 2 != w / 2,
            BodyKind::Cube => (u ^ w).count_ones() == 1,
        }
    }

    /// Centre of the body (centroid of the simplex, origin otherwise).
    pub fn center<T: Scalar>(&self) -> Vec<T> {
        let d = self.ambient_dim();
        match self.kind {
            BodyKind::Simplex => vec![T::one() / T::of_usize(d); d],
            _ => vec![T::zero(); d],
        }
    }

    /// Signed slack of every defining inequality at `x`; all `>= 0` inside.
    pub fn slacks<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        match self.kind {
            BodyKind::Simplex => x.to_vec(),
            BodyKind::CrossPolytope => vec![T::one() - x.iter().map(|v| v.abs()).sum::<T>()],
            BodyKind::Cube => x.iter().map(|v| T::lit(0.5) - v.abs()).collect(),
        }
    }

    pub fn thresholds<T: Scalar>(&self) -> Thresholds<T> {
        thresholds(*self)
    }
}

/// A unit vector on the body's constraint sphere (the sum-zero sphere for the simplex).
#[derive(Clone, Debug, PartialEq)]
pub struct Direction<T> {
    coords: Vec<T>,
    kind: BodyKind,
}

impl<T: Scalar> Direction<T> {
    /// Projects (simplex) and normalises `coords`.
    pub fn new(body: Body, coords: &[T]) -> Result<Self> {
        make_direction(coords, body)
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn to_f64(&self) -> Direction<f64> {
        Direction { coords: self.coords.iter().map(|x| x.as_f64()).collect(), kind: self.kind }
    }
}

pub fn make_direction<T: Scalar>(coords: &[T], body: Body) -> Result<Direction<T>> {
    let d = body.ambient_dim();
    if coords.len() != d {
        return Err(SliceError::DimensionMismatch { expected: d, got: coords.len() });
    }
    if coords.iter().any(|x| !x.is_finite()) {
        return Err(SliceError::InvalidDirection("non-finite coordinate"));
    }
    let mut v = coords.to_vec();
    if body.kind == BodyKind::Simplex {
        let mean = v.iter().copied().sum::<T>() / T::of_usize(d);
        v.iter_mut().for_each(|x| *x -= mean);
    }
    let r = norm(&v);
    if !(r >= T::lit(1e-14)) {
        return Err(SliceError::ZeroVector);
    }
    v.iter_mut().for_each(|x| *x /= r);
    Ok(Direction { coords: v, kind: body.kind })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Canonical {
    /// Simplex `a^(n)` towards a vertex; cross-polytope `e_1`.
    Apex,
    /// Cube `(1,…,1)/√n`.
    MainDiagonal,
    /// Simplex `(1,-1,0,…)/√2`; cube `(1,1,0,…)/√2`.
    TwoCoordinate,
    /// Simplex with odd `n`: `(1,-1,1,-1,…)/√(n+1)`.
    Alternating,
}

pub fn canonical_direction<T: Scalar>(body: Body, which: Canonical) -> Result<Direction<T>> {
    let n = body.n;
    let d = body.ambient_dim();
    let unsupported = Err(SliceError::Unsupported { which, body: body.kind });
    let mut v = vec![T::zero(); d];
    match (body.kind, which) {
        (BodyKind::Simplex, Canonical::Apex) => {
            let nf = T::of_usize(n);
            v[0] = (nf / (nf + T::one())).sqrt();
            let rest = -T::one() / (nf * (nf + T::one())).sqrt();
            v[1..].iter_mut().for_each(|x| *x = rest);
        }
        (BodyKind::CrossPolytope, Canonical::Apex) => v[0] = T::one(),
        (BodyKind::Cube, Canonical::MainDiagonal) => {
            let c = T::one() / T::of_usize(n).sqrt();
            v.iter_mut().for_each(|x| *x = c);
        }
        (BodyKind::Simplex, Canonical::TwoCoordinate) => {
            v[0] = T::FRAC_1_SQRT_2();
            v[1] = -T::FRAC_1_SQRT_2();
        }
        (BodyKind::Cube, Canonical::TwoCoordinate) => {
            v[0] = T::FRAC_1_SQRT_2();
            v[1] = T::FRAC_1_SQRT_2();
        }
        (BodyKind::Simplex, Canonical::Alternating) if n % 2 == 1 => {
            let c = T::one() / T::of_usize(d).sqrt();
            for (j, x) in v.iter_mut().enumerate() {
                *x = if j % 2 == 0 { c } else { -c };
            }
        }
        _ => return unsupported,
    }
    Ok(Direction { coords: v, kind: body.kind })
}

/// The direction singled out as the maximiser: `a^(n)`, `e_1` or `a^[n]`.
pub fn extremal_direction<T: Scalar>(body: Body) -> Direction<T> {
    let which = match body.kind {
        BodyKind::Cube => Canonical::MainDiagonal,
        _ => Canonical::Apex,
    };
    canonical_direction(body, which).expect("always defined")
}

/// The hyperplane `H_t(a) = {x : ⟨a, x⟩ = t}` (offset measured from the body's centre).
#[derive(Clone, Debug, PartialEq)]
pub struct SectionQuery<T> {
    pub body: Body,
    pub a: Direction<T>,
    pub t: T,
}

impl<T: Scalar> SectionQuery<T> {
    pub fn new(body: Body, a: Direction<T>, t: T) -> Result<Self> {
        if a.kind != body.kind || a.coords.len() != body.ambient_dim() {
            return Err(SliceError::DimensionMismatch { expected: body.ambient_dim(), got: a.coords.len() });
        }
        if !t.is_finite() {
            return Err(SliceError::InvalidArgument("offset t must be finite"));
        }
        Ok(SectionQuery { body, a, t })
    }

    /// Builds the direction from raw coordinates as well.
    pub fn from_raw(body: Body, coords: &[T], t: T) -> Result<Self> {
        Self::new(body, make_direction(coords, body)?, t)
    }

    pub fn with_t(&self, t: T) -> Self {
        SectionQuery { body: self.body, a: self.a.clone(), t }
    }
}

/// The vertex maximising `⟨a, v⟩` and the direction rewritten in the
/// symmetry-normalised order used by the closed forms.
#[derive(Clone, Debug, PartialEq)]
pub struct ApexFrame<T> {
    pub apex: usize,
    pub apex_dot: T,
    /// Largest `⟨a, w⟩` over vertices `w` adjacent to the apex.
    pub neighbor_dot: T,
    /// Smallest `⟨a, w⟩` over all vertices.
    pub min_dot: T,
    /// Simplex: apex coordinate then the rest in decreasing order.
    /// Cross-polytope: `|a_apex|` then the other `|a_j|` decreasing.
    /// Cube: all `|a_j|` decreasing.
    pub normalized: Vec<T>,
}

fn desc<T: Scalar>(x: &T, y: &T) -> Ordering {
    y.partial_cmp(x).unwrap_or(Ordering::Equal)
}

pub fn apex_frame<T: Scalar>(body: Body, a: &[T]) -> ApexFrame<T> {
    match body.kind {
        BodyKind::Simplex => {
            let apex = argmax(a.iter().copied());
            let mut rest: Vec<T> = a.iter().enumerate().filter(|&(j, _)| j != apex).map(|(_, &x)| x).collect();
            rest.sort_by(desc);
            let min_dot = *rest.last().unwrap_or(&a[apex]);
            let mut normalized = vec![a[apex]];
            let neighbor_dot = rest[0];
            normalized.extend(rest);
            ApexFrame { apex, apex_dot: a[apex], neighbor_dot, min_dot, normalized }
        }
        BodyKind::CrossPolytope => {
            let j = argmax(a.iter().map(|x| x.abs()));
            let apex = if a[j] >= T::zero() { 2 * j } else { 2 * j + 1 };
            let mut rest: Vec<T> = a.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.abs()).collect();
            rest.sort_by(desc);
            let apex_dot = a[j].abs();
            let mut normalized = vec![apex_dot];
            let neighbor_dot = rest[0];
            normalized.extend(rest);
            ApexFrame { apex, apex_dot, neighbor_dot, min_dot: -apex_dot, normalized }
        }
        BodyKind::Cube => {
            let apex = a.iter().enumerate().fold(0usize, |id, (i, &x)| if x >= T::zero() { id | 1 << i } else { id });
            let mut normalized: Vec<T> = a.iter().map(|x| x.abs()).collect();
            normalized.sort_by(desc);
            let half_sum = normalized.iter().copied().sum::<T>() / T::lit(2.0);
            let smallest = *normalized.last().expect("n >= 2");
            ApexFrame { apex, apex_dot: half_sum, neighbor_dot: half_sum - smallest, min_dot: -half_sum, normalized }
        }
    }
}

fn argmax<T: Scalar>(it: impl Iterator<Item = T>) -> usize {
    let mut best = 0;
    let mut best_val = T::neg_infinity();
    for (i, x) in it.enumerate() {
        if x > best_val {
            best = i;
            best_val = x;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub enum Regime<T> {
    /// `H_t(a)` cuts off exactly the vertex `apex`; `normalized` is the
    /// direction in the order of [`ApexFrame::normalized`].
    VertexSeparating { apex: usize, normalized: Vec<T> },
    General,
    Empty,
}

impl<T> Regime<T> {
    pub fn is_separating(&self) -> bool {
        matches!(self, Regime::VertexSeparating { .. })
    }
}

pub fn regime_check<T: Scalar>(q: &SectionQuery<T>) -> Regime<T> {
    let f = apex_frame(q.body, q.a.coords());
    let tol = T::lit(TIE_TOL);
    if q.t > f.apex_dot + tol || q.t < f.min_dot - tol {
        Regime::Empty
    } else if f.apex_dot - q.t > tol && q.t - f.neighbor_dot > tol {
        Regime::VertexSeparating { apex: f.apex, normalized: f.normalized }
    } else {
        Regime::General
    }
}

/// Constants attached to a body and dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds<T> {
    pub body: Body,
    pub circumradius: T,
    /// `d(n)`.
    pub edge_midpoint: T,
    /// Offset above which the extremal direction is a local maximum of the volume.
    pub volume_flip: T,
    /// Same for the perimeter's product factor (simplex, cube).
    pub perimeter_flip: Option<T>,
    /// Cross-polytope: `4/n`, lower end of the local-maximum range of the perimeter at `e_1`.
    pub cross_perimeter_local: Option<T>,
    /// Cross-polytope: `M(n)`, below which `e_1` is the only structured critical point.
    pub cross_min_phi: Option<T>,
    /// Cube: `(n-2)/(2√n)`, below which `a^[n]` leaves the separating regime.
    pub cube_regime_floor: Option<T>,
    pub cube_three: Option<CubeThree<T>>,
}

/// Special constants of the 3-cube perimeter problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubeThree<T> {
    pub t0: T,
    pub t1: T,
    /// Offset where `a^[3]` switches from local minimum to local maximum of the perimeter.
    pub perimeter_flip: T,
}

pub fn thresholds<T: Scalar>(body: Body) -> Thresholds<T> {
    let n = body.n;
    let nf = T::of_usize(n);
    let one = T::one();
    let two = T::lit(2.0);
    let mut out = Thresholds {
        body,
        circumradius: body.circumradius(),
        edge_midpoint: body.edge_midpoint_distance(),
        volume_flip: T::zero(),
        perimeter_flip: None,
        cross_perimeter_local: None,
        cross_min_phi: None,
        cube_regime_floor: None,
        cube_three: None,
    };
    match body.kind {
        BodyKind::Simplex => {
            let r = (nf / (nf + one)).sqrt();
            let den = nf * (nf + two);
            out.volume_flip = (two * nf + one) / den * r;
            out.perimeter_flip = Some((T::lit(3.0) * nf + two) / den * r);
        }
        BodyKind::CrossPolytope => {
            out.volume_flip = T::lit(3.0) / (nf + two);
            out.cross_perimeter_local = Some(T::lit(4.0) / nf);
            out.cross_min_phi = Some(match n {
                3 => one / T::lit(3.0).sqrt(),
                4 => T::lit(5.0) / T::lit(32.0) * T::lit(10.0).sqrt(),
                5 => T::lit(7.0) / T::lit(75.0) * T::lit(21.0).sqrt(),
                _ => T::lit(3.0) / (nf + two),
            });
        }
        BodyKind::Cube => {
            let s = nf.sqrt();
            out.volume_flip = (nf + one) / (T::lit(4.0) * s);
            out.perimeter_flip = Some((nf + two) / (T::lit(4.0) * s));
            out.cube_regime_floor = Some((nf - two) / (two * s));
            if n == 3 {
                let r3 = T::lit(3.0).sqrt();
                out.cube_three = Some(CubeThree {
                    t0: (r3 + T::lit(8.0) * T::SQRT_2()) / T::lit(18.0),
                    t1: ((T::lit(18.0) + T::lit(10.0) * r3).sqrt() - (T::lit(6.0) - two * r3).sqrt()) / T::lit(6.0),
                    perimeter_flip: T::lit(11.0) * r3 / T::lit(30.0),
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FaceId {
    /// Sorted vertex indices.
    Simplex(Vec<usize>),
    /// Sorted `(axis, positive)` pairs spanning the face.
    Cross(Vec<(usize, bool)>),
    /// The whole cross-polytope (its children are the facets).
    CrossBody,
    /// Per coordinate: `0` free, `1` fixed at `+1/2`, `-1` fixed at `-1/2`.
    Cube(Vec<i8>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FaceDescriptor {
    pub kind: BodyKind,
    pub dim: usize,
    pub id: FaceId,
}

impl FaceDescriptor {
    /// The body itself, as the root of the face recursion.
    pub fn whole(body: Body) -> Self {
        let id = match body.kind {
            BodyKind::Simplex => FaceId::Simplex((0..=body.n).collect()),
            BodyKind::CrossPolytope => FaceId::CrossBody,
            BodyKind::Cube => FaceId::Cube(vec![0; body.n]),
        };
        FaceDescriptor { kind: body.kind, dim: body.n, id }
    }

    pub fn vertex_ids(&self, body: Body) -> Vec<usize> {
        match &self.id {
            FaceId::Simplex(v) => v.clone(),
            FaceId::Cross(s) => s.iter().map(|&(j, pos)| if pos { 2 * j } else { 2 * j + 1 }).collect(),
            FaceId::CrossBody => (0..2 * body.n).collect(),
            FaceId::Cube(fix) => {
                let free: Vec<usize> = (0..fix.len()).filter(|&i| fix[i] == 0).collect();
                let base = fix.iter().enumerate().fold(0usize, |id, (i, &f)| if f == 1 { id | 1 << i } else { id });
                (0..1usize << free.len())
                    .map(|mask| {
                        free.iter().enumerate().fold(base, |id, (b, &i)| if mask >> b & 1 == 1 { id | 1 << i } else { id })
                    })
                    .collect()
            }
        }
    }

    /// Edges of the face as pairs of vertex ids.
    pub fn edges(&self, body: Body) -> Vec<(usize, usize)> {
        let v = self.vertex_ids(body);
        if let FaceId::Cube(fix) = &self.id {
            let free: Vec<usize> = (0..fix.len()).filter(|&i| fix[i] == 0).collect();
            return v
                .iter()
                .flat_map(|&u| free.iter().filter(move |&&i| u >> i & 1 == 0).map(move |&i| (u, u | 1 << i)))
                .collect();
        }
        let mut out = Vec::new();
        for (i, &u) in v.iter().enumerate() {
            for &w in &v[i + 1..] {
                if body.adjacent(u, w) {
                    out.push((u.min(w), u.max(w)));
                }
            }
        }
        out
    }

    pub fn children(&self) -> Vec<FaceDescriptor> {
        if self.dim == 0 {
            return Vec::new();
        }
        let kind = self.kind;
        let dim = self.dim - 1;
        match &self.id {
            FaceId::Simplex(v) => (0..v.len())
                .map(|skip| {
                    let sub = v.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                    FaceDescriptor { kind, dim, id: FaceId::Simplex(sub) }
                })
                .collect(),
            FaceId::Cross(s) => (0..s.len())
                .map(|skip| {
                    let sub = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                    FaceDescriptor { kind, dim, id: FaceId::Cross(sub) }
                })
                .collect(),
            FaceId::CrossBody => {
                let n = self.dim;
                (0..1usize << n)
                    .map(|signs| {
                        let s = (0..n).map(|j| (j, signs >> j & 1 == 0)).collect();
                        FaceDescriptor { kind, dim, id: FaceId::Cross(s) }
                    })
                    .collect()
            }
            FaceId::Cube(fix) => {
                let mut out = Vec::new();
                for i in (0..fix.len()).filter(|&i| fix[i] == 0) {
                    for s in [-1i8, 1] {
                        let mut f = fix.clone();
                        f[i] = s;
                        out.push(FaceDescriptor { kind, dim, id: FaceId::Cube(f) });
                    }
                }
                out
            }
        }
    }
}

pub fn face_lattice(body: Body, dim: usize) -> Result<Vec<FaceDescriptor>> {
    let n = body.n;
    if dim + 1 > n {
        return Err(SliceError::DimensionOutOfRange { dim, max: n - 1 });
    }
    let kind = body.kind;
    Ok(match kind {
        BodyKind::Simplex => combinations(n + 1, dim + 1)
            .into_iter()
            .map(|c| FaceDescriptor { kind, dim, id: FaceId::Simplex(c) })
            .collect(),
        BodyKind::CrossPolytope => {
            let mut out = Vec::new();
            for support in combinations(n, dim + 1) {
                for signs in 0..1usize << (dim + 1) {
                    let s = support.iter().enumerate().map(|(b, &j)| (j, signs >> b & 1 == 0)).collect();
                    out.push(FaceDescriptor { kind, dim, id: FaceId::Cross(s) });
                }
            }
            out
        }
        BodyKind::Cube => {
            if n > MAX_ENUMERATED_DIM {
                return Err(SliceError::ResourceLimit("cube face enumeration"));
            }
            let mut out = Vec::new();
            for free in combinations(n, dim) {
                let fixed: Vec<usize> = (0..n).filter(|i| !free.contains(i)).collect();
                for signs in 0..1usize << fixed.len() {
                    let mut f = vec![0i8; n];
                    for (b, &i) in fixed.iter().enumerate() {
                        f[i] = if signs >> b & 1 == 1 { 1 } else { -1 };
                    }
                    out.push(FaceDescriptor { kind, dim, id: FaceId::Cube(f) });
                }
            }
            out
        }
    })
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub(crate) fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Uniform direction on the constraint sphere.
pub fn sample_direction<T: Scalar, R: Rng + ?Sized>(body: Body, rng: &mut R) -> Direction<T> {
    loop {
        let raw: Vec<T> = (0..body.ambient_dim()).map(|_| T::lit(rng.sample::<f64, _>(StandardNormal))).collect();
        if let Ok(d) = make_direction(&raw, body) {
            return d;
        }
    }
}
