//! The sampled graph `M = {Λ(D²w_δ(a))}` in `(z, s)` coordinates, its binary
//! record format, and the inf-convolution extension `g̃`.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cone::LambdaCone;
use crate::error::{Error, Result};
use crate::hessian::{invariants, site_from_invariants, Point12};
use crate::hyperbolicity::Space;
use crate::rng::{normalize, sample_rng, stream_id};
use crate::spectra::{eigen_sym, DEFAULT_TOL};

const MAGIC: &[u8; 8] = b"HSLGRAPH";
pub const GRAPH_FORMAT_VERSION: u32 = 1;
/// Radii of the sampled sites lie in `[R_MIN, 1]`.
pub const R_MIN: f64 = 0.5;

/// Parameters of a site: `(r0, m, n, log r)` on `R¹²`, frame coordinates and
/// `log r` on a hyperplane.
pub fn param_len(space: &Space) -> usize {
    match space {
        Space::Full => 4,
        Space::Restricted(_) => 12,
    }
}

/// The site and radius encoded by `params`. Out-of-range parameters are
/// folded back onto the admissible set.
pub fn site_of(space: &Space, params: &[f64]) -> Result<(Point12<f64>, f64)> {
    if params.len() != param_len(space) {
        return Err(Error::DimensionMismatch { expected: param_len(space), got: params.len() });
    }
    let r = params[params.len() - 1].exp();
    match space {
        Space::Full => {
            let (mut r0, mut m, mut n) = (params[0], params[1].abs(), params[2].abs());
            let rho = r0 * r0 + m * m + n * n;
            if rho > 1.0 {
                let c = rho.sqrt();
                r0 /= c;
                m /= c;
                n /= c;
            }
            Ok((site_from_invariants(r0, m, n)?, r))
        }
        Space::Restricted(h) => {
            let mut y = params[..11].to_vec();
            if normalize(&mut y) == 0.0 {
                return Err(Error::Domain("zero frame vector".into()));
            }
            Ok((h.embed(&y)?, r))
        }
    }
}

/// Sorted spectrum `Λ(D²w_δ(r·x))` for the site encoded by `params`.
pub fn spectrum_of(space: &Space, delta: f64, params: &[f64]) -> Result<Vec<f64>> {
    let (x, r) = site_of(space, params)?;
    let h = space.hessian(&x, delta)?;
    let scale = if delta == 0.0 { 1.0 } else { r.powf(-delta) };
    Ok(eigen_sym(&h, DEFAULT_TOL)?.values.into_iter().map(|v| v * scale).collect())
}

/// Parameters of a unit site `x` scaled by `r`.
pub fn params_of(space: &Space, x: &Point12<f64>, r: f64) -> Result<Vec<f64>> {
    let mut p = match space {
        Space::Full => {
            let inv = invariants(x)?;
            vec![inv.r0.unwrap_or(0.0), inv.m, inv.n]
        }
        Space::Restricted(h) => h.coordinates_of(x),
    };
    p.push(r.ln());
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSidecar {
    pub version: u32,
    pub dim: usize,
    pub delta: f64,
    pub seed: u64,
    pub count: usize,
    pub cone_ratio: f64,
}

/// Sorted spectra of `D²w_δ` at sampled sites, stored as `s = g(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledGraph {
    pub dim: usize,
    pub delta: f64,
    pub seed: u64,
    pub lambda_hat: f64,
    pub z: Vec<Vec<f64>>,
    pub g: Vec<f64>,
    pub params: Vec<Vec<f64>>,
}

/// Sample `count` sites; on `R¹²` with `δ > 0` radii are uniform in `[1/2, 1]`.
pub fn build_graph(space: &Space, delta: f64, count: usize, seed: u64) -> Result<SampledGraph> {
    let cone = LambdaCone::for_delta(space.dim(), delta)?;
    if matches!(space, Space::Restricted(_)) && delta != 0.0 {
        return Err(Error::Domain("the hyperplane graph is defined for δ = 0 only".into()));
    }
    let stream = stream_id("graph");
    let rows: Vec<(Vec<f64>, f64, Vec<f64>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, stream, i);
            let x = space.random_unit(&mut rng);
            let r = if delta == 0.0 { 1.0 } else { rng.random_range(R_MIN..=1.0) };
            let params = params_of(space, &x, r)?;
            let spec = spectrum_of(space, delta, &params)?;
            let (z, s) = cone.to_axis(&spec);
            Ok((z, s, params))
        })
        .collect::<Result<_>>()?;
    let mut graph = SampledGraph { dim: space.dim(), delta, seed, lambda_hat: cone.lambda_hat, z: vec![], g: vec![], params: vec![] };
    for (z, s, p) in rows {
        graph.z.push(z);
        graph.g.push(s);
        graph.params.push(p);
    }
    Ok(graph)
}

/// Outcome of the pairwise cone test on sampled spectra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeValidation {
    pub pairs: usize,
    pub violations: usize,
    /// Largest `max(φ(d), φ(−d))` over tested differences; `≤ 0` is admissible.
    pub worst_phi: f64,
}

impl SampledGraph {
    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn cone(&self) -> LambdaCone {
        LambdaCone { dim: self.dim, lambda_hat: self.lambda_hat }
    }

    pub fn spectrum(&self, i: usize) -> Vec<f64> {
        self.cone().from_axis(&self.z[i], self.g[i])
    }

    /// `g̃(z) = min_w {g(w) + e(z − w)}` over the samples and extra graph points.
    pub fn extend_g_with(&self, z: &[f64], extra: &[(Vec<f64>, f64)]) -> f64 {
        let cone = self.cone();
        let mut diff = vec![0.0; z.len()];
        let mut best = f64::INFINITY;
        let points = self.z.iter().zip(&self.g).chain(extra.iter().map(|(w, g)| (w, g)));
        for (w, g) in points {
            for ((d, a), b) in diff.iter_mut().zip(z).zip(w) {
                *d = a - b;
            }
            best = best.min(g + cone.support_e(&diff));
        }
        best
    }

    pub fn extend_g(&self, z: &[f64]) -> f64 {
        self.extend_g_with(z, &[])
    }

    /// Random pairs `(Λ(a), T_σΛ(b))` must differ by a vector outside `K ∪ −K`.
    pub fn validate_cone(&self, pairs: usize, seed: u64) -> ConeValidation {
        let cone = self.cone();
        let stream = stream_id("graph-cone");
        let n = self.len();
        if n == 0 {
            return ConeValidation { pairs: 0, violations: 0, worst_phi: f64::NEG_INFINITY };
        }
        let phis: Vec<f64> = (0..pairs as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = sample_rng(seed, stream, k);
                let a = self.spectrum(rng.random_range(0..n));
                let mut b = self.spectrum(rng.random_range(0..n));
                // every other pair uses a permuted copy of the second spectrum
                if k % 2 == 1 {
                    for i in (1..b.len()).rev() {
                        b.swap(i, rng.random_range(0..=i));
                    }
                }
                let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                let neg: Vec<f64> = d.iter().map(|x| -x).collect();
                cone.phi(&d).max(cone.phi(&neg))
            })
            .collect();
        let scale = self.g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let violations = phis.iter().filter(|&&p| p > 1e-9 * scale).count();
        ConeValidation { pairs, violations, worst_phi: phis.iter().cloned().fold(f64::NEG_INFINITY, f64::max) }
    }

    pub fn sidecar(&self) -> GraphSidecar {
        GraphSidecar {
            version: GRAPH_FORMAT_VERSION,
            dim: self.dim,
            delta: self.delta,
            seed: self.seed,
            count: self.len(),
            cone_ratio: self.lambda_hat,
        }
    }

    pub fn sidecar_path(path: &Path) -> PathBuf {
        path.with_extension("json")
    }

    /// Binary record plus a JSON sidecar next to it.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&GRAPH_FORMAT_VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.dim as u32).to_le_bytes());
        let plen = self.params.first().map_or(0, Vec::len);
        buf.extend_from_slice(&(plen as u32).to_le_bytes());
        buf.extend_from_slice(&self.delta.to_le_bytes());
        buf.extend_from_slice(&self.seed.to_le_bytes());
        buf.extend_from_slice(&self.lambda_hat.to_le_bytes());
        write_array(&mut buf, self.z.iter().flatten());
        write_array(&mut buf, self.g.iter());
        write_array(&mut buf, self.params.iter().flatten());
        fs::File::create(path)?.write_all(&buf)?;
        fs::write(Self::sidecar_path(path), serde_json::to_string_pretty(&self.sidecar())?)?;
        Ok(())
    }

    /// Reads a record; a sidecar, when present, must agree with the header.
    pub fn read(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        fs::File::open(path)?.read_to_end(&mut bytes)?;
        let mut cur = Cursor { bytes: &bytes, pos: 0 };
        if cur.take(8)? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = cur.u32()?;
        if version != GRAPH_FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let dim = cur.u32()? as usize;
        let plen = cur.u32()? as usize;
        let delta = cur.f64()?;
        let seed = cur.u64()?;
        let lambda_hat = cur.f64()?;
        if dim < 2 {
            return Err(Error::Format(format!("dimension {dim}")));
        }
        let z = cur.array()?;
        let g = cur.array()?;
        let p = cur.array()?;
        if cur.pos != bytes.len() {
            return Err(Error::Format("trailing bytes".into()));
        }
        let count = g.len();
        if z.len() != count * (dim - 1) || p.len() != count * plen {
            return Err(Error::Format("array lengths disagree".into()));
        }
        let graph = SampledGraph {
            dim,
            delta,
            seed,
            lambda_hat,
            z: z.chunks(dim - 1).map(<[f64]>::to_vec).collect(),
            g,
            params: if plen == 0 { vec![vec![]; count] } else { p.chunks(plen).map(<[f64]>::to_vec).collect() },
        };
        let side = Self::sidecar_path(path);
        if side.exists() {
            let meta: GraphSidecar = serde_json::from_str(&fs::read_to_string(side)?)?;
            if meta != graph.sidecar() {
                return Err(Error::Format("sidecar disagrees with the record".into()));
            }
        }
        Ok(graph)
    }
}

fn write_array<'a>(buf: &mut Vec<u8>, values: impl Iterator<Item = &'a f64>) {
    let values: Vec<f64> = values.copied().collect();
    buf.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Format("truncated record".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("four bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("eight bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("eight bytes")))
    }

    fn array(&mut self) -> Result<Vec<f64>> {
        let n = self.u64()? as usize;
        if n > (self.bytes.len() - self.pos) / 8 {
            return Err(Error::Format("array count exceeds record size".into()));
        }
        (0..n).map(|_| self.f64()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::gaussian_vec;

    #[test]
    fn params_reproduce_spectra() {
        let space = Space::Full;
        let mut rng = sample_rng(120, 0, 0);
        let x = Point12::random_unit(&mut rng);
        let p = params_of(&space, &x, 0.7).unwrap();
        let direct = eigen_sym(&space.hessian(&x.scale(&0.7), 0.2).unwrap(), DEFAULT_TOL).unwrap().values;
        let via = spectrum_of(&space, 0.2, &p).unwrap();
        for (a, b) in direct.iter().zip(&via) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let h = Space::hyperplane_default();
        let y = h.random_unit(&mut rng);
        let p = params_of(&h, &y, 1.0).unwrap();
        let (back, _) = site_of(&h, &p).unwrap();
        assert!(back.distance(&y) < 1e-14);
    }

    #[test]
    fn samples_satisfy_cone_condition() {
        for (space, delta) in [(Space::Full, 0.0), (Space::Full, 0.3), (Space::hyperplane_default(), 0.0)] {
            let g = build_graph(&space, delta, 300, 5).unwrap();
            let v = g.validate_cone(3000, 6);
            assert_eq!(v.violations, 0, "{v:?}");
        }
    }

    #[test]
    fn extension_reproduces_samples_and_is_lipschitz() {
        let g = build_graph(&Space::Full, 0.0, 300, 7).unwrap();
        for i in 0..g.len() {
            assert!((g.extend_g(&g.z[i]) - g.g[i]).abs() <= 1e-9);
        }
        let ck = g.cone().lipschitz();
        let mut rng = sample_rng(121, 0, 0);
        for _ in 0..200 {
            let a: Vec<f64> = gaussian_vec(&mut rng, 11).iter().map(|v| 3.0 * v).collect();
            let b: Vec<f64> = gaussian_vec(&mut rng, 11).iter().map(|v| 3.0 * v).collect();
            let d = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            assert!((g.extend_g(&a) - g.extend_g(&b)).abs() <= ck * d + 1e-12);
        }
    }

    #[test]
    fn single_sample_graph() {
        let g = build_graph(&Space::Full, 0.0, 1, 8).unwrap();
        let cone = g.cone();
        let mut rng = sample_rng(122, 0, 0);
        let z = gaussian_vec(&mut rng, 11);
        let d: Vec<f64> = z.iter().zip(&g.z[0]).map(|(a, b)| a - b).collect();
        assert_eq!(g.extend_g(&z), g.g[0] + cone.support_e(&d));
    }

    #[test]
    fn record_round_trip_and_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("graph.bin");
        let g = build_graph(&Space::Full, 0.25, 40, 9).unwrap();
        g.write(&path).unwrap();
        let back = SampledGraph::read(&path).unwrap();
        assert_eq!(back, g);
        let meta: GraphSidecar = serde_json::from_str(&fs::read_to_string(dir.path().join("graph.json")).unwrap()).unwrap();
        assert_eq!(meta.count, 40);
        assert_eq!(meta.seed, 9);

        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(SampledGraph::read(&path), Err(Error::Format(_))));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        fs::write(&path, &bad).unwrap();
        assert!(matches!(SampledGraph::read(&path), Err(Error::Format(_))));
        let mut newer = bytes.clone();
        newer[8] = 9;
        fs::write(&path, &newer).unwrap();
        assert!(matches!(SampledGraph::read(&path), Err(Error::Format(_))));
    }
}
