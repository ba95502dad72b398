//! Formula-free ground truth: exact slicing over the face lattice and a
//! Monte Carlo slab estimator.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rand_distr::Exp1;

use crate::bodies::{apex_frame, face_lattice, regime_check, Body, BodyKind, FaceDescriptor, FaceId, Regime, SectionQuery, MAX_ENUMERATED_DIM, TIE_TOL};
use crate::closed_form::closed_a;
use crate::error::{Result, SliceError};
use crate::scalar::{dot, factorial, norm, Scalar};

/// Relative rank tolerance for affine hulls.
const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum PointId {
    Vertex(usize),
    /// Crossing point of the edge `(u, w)` with `u < w`.
    Edge(usize, usize),
}

/// Vertices of `H_t(a) ∩ K` with an orthonormal frame of the hyperplane direction.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionPolytope<T> {
    pub points: Vec<Vec<T>>,
    /// Orthonormal basis of `a^⊥` (intersected with the sum-zero subspace for the simplex).
    pub frame: Vec<Vec<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub std_error: T,
    pub samples: usize,
}

/// Orthonormal basis of `span{p_i - p_0}`; directions shorter than
/// `RANK_TOL` times the point cloud's extent count as degenerate.
fn affine_basis<T: Scalar>(points: &[Vec<T>]) -> Vec<Vec<T>> {
    let Some(p0) = points.first() else { return Vec::new() };
    let diffs: Vec<Vec<T>> = points[1..].iter().map(|p| p.iter().zip(p0).map(|(&x, &y)| x - y).collect()).collect();
    let extent = diffs.iter().fold(T::zero(), |m, d| m.max(norm(d)));
    let tol = T::lit(RANK_TOL) * extent;
    let mut basis: Vec<Vec<T>> = Vec::new();
    for d in diffs {
        let mut v = d;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, &y)| *x -= c * y);
            }
        }
        let r = norm(&v);
        if r > tol && r > T::zero() {
            v.iter_mut().for_each(|x| *x /= r);
            basis.push(v);
        }
    }
    basis
}

fn distance_to_flat<T: Scalar>(c: &[T], origin: &[T], basis: &[Vec<T>]) -> T {
    let mut v: Vec<T> = c.iter().zip(origin).map(|(&x, &y)| x - y).collect();
    for _ in 0..2 {
        for b in basis {
            let k = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, &y)| *x -= k * y);
        }
    }
    norm(&v)
}

fn centroid<T: Scalar>(points: &[Vec<T>]) -> Vec<T> {
    let m = T::of_usize(points.len());
    let mut c = vec![T::zero(); points[0].len()];
    for p in points {
        c.iter_mut().zip(p).for_each(|(x, &y)| *x += y);
    }
    c.iter_mut().for_each(|x| *x /= m);
    c
}

fn diameter<T: Scalar>(points: &[Vec<T>]) -> T {
    let mut best = T::zero();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d: Vec<T> = p.iter().zip(q).map(|(&x, &y)| x - y).collect();
            best = best.max(norm(&d));
        }
    }
    best
}

/// Memoised pyramid decomposition of `H ∩ F` and `F ∩ {⟨a,x⟩ ≥ t}` over faces `F`.
struct Slicer<T> {
    body: Body,
    /// `⟨a, v⟩ - t` per vertex id.
    offset: Vec<T>,
    /// `-1`, `0`, `1`: below, on, above `H`.
    side: Vec<i8>,
    section_memo: HashMap<FaceId, T>,
    cap_memo: HashMap<FaceId, T>,
}

impl<T: Scalar> Slicer<T> {
    fn new(q: &SectionQuery<T>) -> Result<Self> {
        if q.body.kind == BodyKind::Cube && q.body.n > MAX_ENUMERATED_DIM {
            return Err(SliceError::ResourceLimit("exact slicing of the cube"));
        }
        let a = q.a.coords();
        let tol = T::lit(TIE_TOL);
        let offset: Vec<T> = (0..q.body.vertex_count()).map(|id| q.body.vertex_dot(a, id) - q.t).collect();
        let side = offset
            .iter()
            .map(|&s| if s > tol { 1 } else if s < -tol { -1 } else { 0 })
            .collect();
        Ok(Slicer { body: q.body, offset, side, section_memo: HashMap::new(), cap_memo: HashMap::new() })
    }

    fn point(&self, id: PointId) -> Vec<T> {
        match id {
            PointId::Vertex(v) => self.body.vertex(v),
            PointId::Edge(u, w) => {
                let (su, sw) = (self.offset[u], self.offset[w]);
                let lambda = su / (su - sw);
                let pu = self.body.vertex::<T>(u);
                let pw = self.body.vertex::<T>(w);
                pu.iter().zip(&pw).map(|(&x, &y)| x + lambda * (y - x)).collect()
            }
        }
    }

    fn crossing_edges(&self, face: &FaceDescriptor, out: &mut Vec<PointId>) {
        for (u, w) in face.edges(self.body) {
            if self.side[u] * self.side[w] < 0 {
                out.push(PointId::Edge(u, w));
            }
        }
    }

    fn section_ids(&self, face: &FaceDescriptor) -> Vec<PointId> {
        let verts = face.vertex_ids(self.body);
        let mut ids: Vec<PointId> = verts.iter().filter(|&&v| self.side[v] == 0).map(|&v| PointId::Vertex(v)).collect();
        if verts.iter().any(|&v| self.side[v] > 0) && verts.iter().any(|&v| self.side[v] < 0) {
            self.crossing_edges(face, &mut ids);
        }
        ids.sort();
        ids
    }

    fn cap_ids(&self, face: &FaceDescriptor) -> Vec<PointId> {
        let verts = face.vertex_ids(self.body);
        let mut ids: Vec<PointId> = verts.iter().filter(|&&v| self.side[v] >= 0).map(|&v| PointId::Vertex(v)).collect();
        if !ids.is_empty() && verts.iter().any(|&v| self.side[v] < 0) {
            self.crossing_edges(face, &mut ids);
        }
        ids.sort();
        ids
    }

    fn points(&self, ids: &[PointId]) -> Vec<Vec<T>> {
        ids.iter().map(|&id| self.point(id)).collect()
    }

    /// `vol_{dim-1}(H ∩ F)`; zero unless the piece has exactly that dimension.
    fn section(&mut self, face: &FaceDescriptor) -> T {
        if let Some(&v) = self.section_memo.get(&face.id) {
            return v;
        }
        let v = self.section_uncached(face);
        self.section_memo.insert(face.id.clone(), v);
        v
    }

    fn section_uncached(&mut self, face: &FaceDescriptor) -> T {
        if face.dim == 0 {
            return T::zero();
        }
        let m = face.dim - 1;
        let ids = self.section_ids(face);
        if ids.is_empty() {
            return T::zero();
        }
        let pts = self.points(&ids);
        let basis = affine_basis(&pts);
        if basis.len() != m {
            return T::zero();
        }
        match m {
            0 => return T::one(),
            1 => return diameter(&pts),
            _ => {}
        }
        let c = centroid(&pts);
        let mut seen: HashSet<Vec<PointId>> = HashSet::new();
        seen.insert(ids);
        let mut total = T::zero();
        for child in face.children() {
            let cids = self.section_ids(&child);
            if cids.is_empty() || !seen.insert(cids.clone()) {
                continue;
            }
            let vol = self.section(&child);
            if vol == T::zero() {
                continue;
            }
            let cpts = self.points(&cids);
            total += distance_to_flat(&c, &cpts[0], &affine_basis(&cpts)) * vol;
        }
        total / T::of_usize(m)
    }

    /// `vol_dim(F ∩ {⟨a,x⟩ ≥ t})`.
    fn cap(&mut self, face: &FaceDescriptor) -> T {
        if let Some(&v) = self.cap_memo.get(&face.id) {
            return v;
        }
        let v = self.cap_uncached(face);
        self.cap_memo.insert(face.id.clone(), v);
        v
    }

    fn cap_uncached(&mut self, face: &FaceDescriptor) -> T {
        let k = face.dim;
        let ids = self.cap_ids(face);
        if ids.is_empty() {
            return T::zero();
        }
        let pts = self.points(&ids);
        let basis = affine_basis(&pts);
        if basis.len() != k {
            return T::zero();
        }
        match k {
            0 => return T::one(),
            1 => return diameter(&pts),
            _ => {}
        }
        let c = centroid(&pts);
        let mut seen: HashSet<Vec<PointId>> = HashSet::new();
        seen.insert(ids);
        let mut total = T::zero();
        let sids = self.section_ids(face);
        if !sids.is_empty() && seen.insert(sids.clone()) {
            let vol = self.section(face);
            if vol > T::zero() {
                let spts = self.points(&sids);
                total += distance_to_flat(&c, &spts[0], &affine_basis(&spts)) * vol;
            }
        }
        for child in face.children() {
            let cids = self.cap_ids(&child);
            if cids.is_empty() || !seen.insert(cids.clone()) {
                continue;
            }
            let vol = self.cap(&child);
            if vol == T::zero() {
                continue;
            }
            let cpts = self.points(&cids);
            total += distance_to_flat(&c, &cpts[0], &affine_basis(&cpts)) * vol;
        }
        total / T::of_usize(k)
    }
}

/// Orthonormal basis of the hyperplane direction space.
pub(crate) fn hyperplane_frame<T: Scalar>(body: Body, a: &[T]) -> Vec<Vec<T>> {
    let d = body.ambient_dim();
    let mut normals = vec![a.to_vec()];
    if body.kind == BodyKind::Simplex {
        normals.push(vec![T::one() / T::of_usize(d).sqrt(); d]);
    }
    let mut basis: Vec<Vec<T>> = Vec::new();
    for i in 0..d {
        let mut v = vec![T::zero(); d];
        v[i] = T::one();
        for _ in 0..2 {
            for b in normals.iter().chain(basis.iter()) {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, &y)| *x -= c * y);
            }
        }
        let r = norm(&v);
        if r > T::lit(1e-6) {
            v.iter_mut().for_each(|x| *x /= r);
            basis.push(v);
        }
        if basis.len() + normals.len() == d {
            break;
        }
    }
    basis
}

pub fn section_vertices<T: Scalar>(q: &SectionQuery<T>) -> Result<SectionPolytope<T>> {
    let slicer = Slicer::new(q)?;
    let ids = if regime_check(q) == Regime::Empty {
        Vec::new()
    } else {
        slicer.section_ids(&FaceDescriptor::whole(q.body))
    };
    Ok(SectionPolytope { points: slicer.points(&ids), frame: hyperplane_frame(q.body, q.a.coords()) })
}

/// `A(a,t)` by recursive pyramid decomposition.
pub fn section_volume_exact<T: Scalar>(q: &SectionQuery<T>) -> Result<T> {
    if regime_check(q) == Regime::Empty {
        return Ok(T::zero());
    }
    Ok(Slicer::new(q)?.section(&FaceDescriptor::whole(q.body)))
}

/// `P(a,t)` as the sum over facets of the facet sections.
pub fn perimeter_exact<T: Scalar>(q: &SectionQuery<T>) -> Result<T> {
    Ok(perimeter_by_facet(q)?.into_iter().map(|(_, v)| v).sum())
}

/// Per-facet contributions to `P(a,t)`, in `face_lattice(body, n-1)` order.
///
/// When `H` contains a ridge, the ridge is one piece of the boundary shared
/// by two facets; each gets half.
pub fn perimeter_by_facet<T: Scalar>(q: &SectionQuery<T>) -> Result<Vec<(FaceDescriptor, T)>> {
    let facets = face_lattice(q.body, q.body.n - 1)?;
    if regime_check(q) == Regime::Empty {
        return Ok(facets.into_iter().map(|f| (f, T::zero())).collect());
    }
    let mut slicer = Slicer::new(q)?;
    let pieces: Vec<(Vec<PointId>, T)> = facets.iter().map(|f| (slicer.section_ids(f), slicer.section(f))).collect();
    let mut shares: HashMap<&[PointId], usize> = HashMap::new();
    for (ids, v) in &pieces {
        if *v > T::zero() {
            *shares.entry(ids.as_slice()).or_insert(0) += 1;
        }
    }
    Ok(facets
        .iter()
        .zip(&pieces)
        .map(|(f, (ids, v))| {
            let k = shares.get(ids.as_slice()).copied().unwrap_or(1);
            (f.clone(), *v / T::of_usize(k))
        })
        .collect())
}

/// `V(a,t) = vol_n({x ∈ K : ⟨a,x⟩ ≥ t})`.
pub fn cap_volume<T: Scalar>(q: &SectionQuery<T>) -> Result<T> {
    let body = q.body;
    let n = body.n;
    let frame = apex_frame(body, q.a.coords());
    let tol = T::lit(TIE_TOL);
    if q.t >= frame.apex_dot - tol {
        return Ok(T::zero());
    }
    if q.t <= frame.min_dot + tol {
        return Ok(body.volume());
    }
    if let Regime::VertexSeparating { normalized: a, .. } = regime_check(q) {
        let t = q.t;
        return Ok(match body.kind {
            BodyKind::Simplex => {
                let a1 = a[0];
                let ratio = a[1..].iter().fold(T::one(), |acc, &x| acc * (a1 - t) / (a1 - x));
                T::of_usize(n + 1).sqrt() / factorial::<T>(n) * ratio
            }
            BodyKind::Cube => {
                let h = a.iter().copied().sum::<T>() / T::lit(2.0) - t;
                a.iter().fold(T::one(), |acc, &x| acc * h / x) / factorial::<T>(n)
            }
            BodyKind::CrossPolytope => (a[0] - t) / T::of_usize(n) * closed_a(q)?.value,
        });
    }
    Ok(Slicer::new(q)?.cap(&FaceDescriptor::whole(body)))
}

/// Default slab half-width for [`section_volume_mc`]: `1e-3` of the body's diameter.
pub fn default_slab_eps<T: Scalar>(body: Body) -> T {
    T::lit(1e-3) * body.diameter::<T>()
}

/// Uniform point of the body, sampled exactly (no rejection).
pub fn sample_body_point<R: Rng + ?Sized>(body: Body, rng: &mut R) -> Vec<f64> {
    let n = body.n;
    match body.kind {
        BodyKind::Cube => (0..n).map(|_| rng.random::<f64>() - 0.5).collect(),
        BodyKind::Simplex => {
            let e: Vec<f64> = (0..=n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let s: f64 = e.iter().sum();
            e.into_iter().map(|x| x / s).collect()
        }
        BodyKind::CrossPolytope => {
            let e: Vec<f64> = (0..=n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let s: f64 = e.iter().sum();
            e[..n].iter().map(|&x| if rng.random::<bool>() { x / s } else { -x / s }).collect()
        }
    }
}

/// Estimates `A(a,t)` as `vol_n(slab)/(2ε)` for the slab `|⟨a,x⟩ - t| ≤ ε`.
pub fn section_volume_mc<T: Scalar, R: Rng + ?Sized>(
    q: &SectionQuery<T>,
    samples: usize,
    slab_eps: T,
    rng: &mut R,
) -> Result<Estimate<T>> {
    if samples < 1000 {
        return Err(SliceError::InvalidArgument("at least 1000 samples are required"));
    }
    if !(slab_eps > T::zero() && slab_eps <= T::lit(1e-2)) {
        return Err(SliceError::InvalidArgument("slab half-width must lie in (0, 1e-2]"));
    }
    let a: Vec<f64> = q.a.coords().iter().map(|x| x.as_f64()).collect();
    let (t, eps) = (q.t.as_f64(), slab_eps.as_f64());
    let hits = (0..samples)
        .filter(|_| {
            let x = sample_body_point(q.body, rng);
            (a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() - t).abs() <= eps
        })
        .count();
    if hits < 100 {
        return Err(SliceError::InsufficientHits { hits });
    }
    let p = hits as f64 / samples as f64;
    let scale = q.body.volume::<f64>() / (2.0 * eps);
    Ok(Estimate {
        value: T::lit(p * scale),
        std_error: T::lit((p * (1.0 - p) / samples as f64).sqrt() * scale),
        samples,
    })
}
