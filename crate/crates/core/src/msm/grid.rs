//! Grid hierarchy and the charge/potential transfer steps.
//!
//! Level k has spacing 2^k·h and its origin sits two spacings below the box
//! minimum on each axis (Φ needs two nodes of margin). Level origins land on
//! the lattice of every finer level, so restriction weights are cardinal on
//! coincident nodes. All loops run in fixed index order; results are
//! deterministic.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::system::ParticleSystem;
use crate::Result;

use super::basis::{weights4, weights4_with_derivs};
use super::kernel::{g_level, g_top};
use super::MsmParams;

/// One grid level: node charges and node potentials over a regular lattice.
#[derive(Debug, Clone)]
pub struct GridLevel {
    pub origin: [f64; 3],
    pub spacing: f64,
    pub dims: [usize; 3],
    pub charge: Vec<f64>,
    pub potential: Vec<f64>,
}

impl GridLevel {
    #[inline]
    pub fn node_count(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    #[inline]
    pub fn flat(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (iz * self.dims[1] + iy) * self.dims[0] + ix
    }

    /// Physical position of a node.
    #[inline]
    pub fn node_pos(&self, ix: usize, iy: usize, iz: usize) -> [f64; 3] {
        [
            self.origin[0] + ix as f64 * self.spacing,
            self.origin[1] + iy as f64 * self.spacing,
            self.origin[2] + iz as f64 * self.spacing,
        ]
    }

    /// Grid coordinate of a physical position on this level.
    #[inline]
    pub fn grid_coord(&self, p: [f64; 3]) -> [f64; 3] {
        [
            (p[0] - self.origin[0]) / self.spacing,
            (p[1] - self.origin[1]) / self.spacing,
            (p[2] - self.origin[2]) / self.spacing,
        ]
    }

    pub fn reset(&mut self) {
        self.charge.iter_mut().for_each(|q| *q = 0.0);
        self.potential.iter_mut().for_each(|u| *u = 0.0);
    }
}

/// The full stack of grids for one MSM evaluation.
#[derive(Debug, Clone)]
pub struct GridHierarchy {
    pub levels: Vec<GridLevel>,
}

impl GridHierarchy {
    /// Build grids covering the box [0, L] per axis with two spacings of
    /// margin per level, plus enough extra coarse nodes to absorb
    /// restriction spill from the finer level.
    pub fn build(box_edges: [f64; 3], params: &MsmParams) -> Result<Self> {
        params.validate()?;
        let mut levels: Vec<GridLevel> = Vec::with_capacity(params.levels as usize);
        for k in 0..params.levels {
            let spacing = params.h * (1u64 << k) as f64;
            let mut origin = [0.0; 3];
            let mut dims = [0usize; 3];
            for axis in 0..3 {
                origin[axis] = -2.0 * spacing;
                // cover the box plus the top margin
                let mut target = box_edges[axis] + 2.0 * spacing;
                if let Some(prev) = levels.last() {
                    // cover the finer grid's extent plus the Φ support spill
                    let fine_max =
                        prev.origin[axis] + (prev.dims[axis] - 1) as f64 * prev.spacing;
                    target = target.max(fine_max + 2.0 * spacing);
                }
                let n = math::ceil((target - origin[axis]) / spacing) as usize + 1;
                dims[axis] = n;
            }
            let count = dims[0] * dims[1] * dims[2];
            levels.push(GridLevel {
                origin,
                spacing,
                dims,
                charge: vec![0.0; count],
                potential: vec![0.0; count],
            });
        }
        Ok(GridHierarchy { levels })
    }

    /// Total charge on one level (conservation diagnostic).
    pub fn level_charge(&self, k: usize) -> f64 {
        self.levels[k].charge.iter().sum()
    }
}

/// Scatter point charges onto the finest grid: q⁰_μ = Σ_j φ⁰_μ(r_j) q_j.
pub fn anterpolate(hierarchy: &mut GridHierarchy, system: &ParticleSystem) -> Result<()> {
    let level = &mut hierarchy.levels[0];
    level.charge.iter_mut().for_each(|q| *q = 0.0);
    for (atom, (&p, &q)) in system.positions.iter().zip(&system.charges).enumerate() {
        let u = level.grid_coord(p);
        let (bx, wx) = weights4(u[0]);
        let (by, wy) = weights4(u[1]);
        let (bz, wz) = weights4(u[2]);
        check_bounds(level.dims, [bx, by, bz]).map_err(|_| Error::Coverage { atom })?;
        for (dz, &wz) in wz.iter().enumerate() {
            for (dy, &wy) in wy.iter().enumerate() {
                let wyz = wy * wz;
                let row = level.flat(bx as usize, by as usize + dy, bz as usize + dz);
                for (dx, &wx) in wx.iter().enumerate() {
                    level.charge[row + dx] += wx * wyz * q;
                }
            }
        }
    }
    Ok(())
}

fn check_bounds(dims: [usize; 3], base: [i64; 3]) -> Result<()> {
    for axis in 0..3 {
        if base[axis] < 0 || base[axis] + 3 >= dims[axis] as i64 {
            return Err(Error::Coverage { atom: usize::MAX });
        }
    }
    Ok(())
}

/// Approximate level-k charges onto level k+1:
/// q^{k+1}_μ = Σ_ν φ^{k+1}_μ(r^k_ν) q^k_ν.
pub fn restrict(hierarchy: &mut GridHierarchy, k: usize) -> Result<()> {
    let (fine_slice, coarse_slice) = hierarchy.levels.split_at_mut(k + 1);
    let fine = &fine_slice[k];
    let coarse = &mut coarse_slice[0];
    coarse.charge.iter_mut().for_each(|q| *q = 0.0);

    for iz in 0..fine.dims[2] {
        for iy in 0..fine.dims[1] {
            for ix in 0..fine.dims[0] {
                let q = fine.charge[fine.flat(ix, iy, iz)];
                if q == 0.0 {
                    continue;
                }
                let u = coarse.grid_coord(fine.node_pos(ix, iy, iz));
                let (bx, wx) = weights4(u[0]);
                let (by, wy) = weights4(u[1]);
                let (bz, wz) = weights4(u[2]);
                check_bounds(coarse.dims, [bx, by, bz])?;
                for (dz, &wz) in wz.iter().enumerate() {
                    for (dy, &wy) in wy.iter().enumerate() {
                        let wyz = wy * wz;
                        let row =
                            coarse.flat(bx as usize, by as usize + dy, bz as usize + dz);
                        for (dx, &wx) in wx.iter().enumerate() {
                            coarse.charge[row + dx] += wx * wyz * q;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Precomputed spherical stencil of level-k kernel values; g^k vanishes
/// beyond 2^{k+1}a, i.e. beyond 2a/h nodes on every level.
fn cutoff_stencil(params: &MsmParams, k: u32, spacing: f64) -> Vec<(i64, i64, i64, f64)> {
    let radius_nodes = 2.0 * params.a / params.h;
    let r_max = radius_nodes.min(1e6) as i64 + 1;
    let r2_max = radius_nodes * radius_nodes;
    let mut stencil = Vec::new();
    for dz in -r_max..=r_max {
        for dy in -r_max..=r_max {
            for dx in -r_max..=r_max {
                let n2 = (dx * dx + dy * dy + dz * dz) as f64;
                if n2 >= r2_max {
                    continue;
                }
                let d = spacing * math::sqrt(n2);
                stencil.push((dx, dy, dz, g_level(d, k, params.a, params.m)));
            }
        }
    }
    stencil
}

/// Grid-local potential from the level-k kernel:
/// u^{k,cutoff}_μ = Σ_ν g^k(r_μ, r_ν) q^k_ν. Writes into the level's
/// `potential` field.
pub fn lattice_cutoff(hierarchy: &mut GridHierarchy, k: usize, params: &MsmParams) {
    let level = &mut hierarchy.levels[k];
    level.potential.iter_mut().for_each(|u| *u = 0.0);
    let stencil = cutoff_stencil(params, k as u32, level.spacing);
    let dims = level.dims;

    for iz in 0..dims[2] {
        for iy in 0..dims[1] {
            for ix in 0..dims[0] {
                let q = level.charge[level.flat(ix, iy, iz)];
                if q == 0.0 {
                    continue;
                }
                for &(dx, dy, dz, w) in &stencil {
                    let jx = ix as i64 + dx;
                    let jy = iy as i64 + dy;
                    let jz = iz as i64 + dz;
                    if jx < 0
                        || jy < 0
                        || jz < 0
                        || jx >= dims[0] as i64
                        || jy >= dims[1] as i64
                        || jz >= dims[2] as i64
                    {
                        continue;
                    }
                    let idx = (jz as usize * dims[1] + jy as usize) * dims[0] + jx as usize;
                    level.potential[idx] += w * q;
                }
            }
        }
    }
}

/// Dense all-pairs sum on the coarsest grid with the un-truncated top kernel.
pub fn top_level(hierarchy: &mut GridHierarchy, params: &MsmParams) {
    let top = hierarchy.levels.len() - 1;
    let level = &mut hierarchy.levels[top];
    level.potential.iter_mut().for_each(|u| *u = 0.0);
    let dims = level.dims;
    let spacing = level.spacing;

    for sz in 0..dims[2] {
        for sy in 0..dims[1] {
            for sx in 0..dims[0] {
                let q = level.charge[level.flat(sx, sy, sz)];
                if q == 0.0 {
                    continue;
                }
                for tz in 0..dims[2] {
                    let dz = (tz as f64 - sz as f64) * spacing;
                    for ty in 0..dims[1] {
                        let dy = (ty as f64 - sy as f64) * spacing;
                        let row = (tz * dims[1] + ty) * dims[0];
                        for tx in 0..dims[0] {
                            let dx = (tx as f64 - sx as f64) * spacing;
                            let d = math::sqrt(dx * dx + dy * dy + dz * dz);
                            level.potential[row + tx] +=
                                g_top(d, params.levels, params.a, params.m) * q;
                        }
                    }
                }
            }
        }
    }
}

/// Add the coarser level's potential back onto level k:
/// u^k_μ = u^{k,cutoff}_μ + Σ_ν φ^{k+1}_ν(r^k_μ) u^{k+1}_ν.
pub fn prolongate(hierarchy: &mut GridHierarchy, k: usize) -> Result<()> {
    let (fine_slice, coarse_slice) = hierarchy.levels.split_at_mut(k + 1);
    let fine = &mut fine_slice[k];
    let coarse = &coarse_slice[0];

    for iz in 0..fine.dims[2] {
        for iy in 0..fine.dims[1] {
            for ix in 0..fine.dims[0] {
                let u = coarse.grid_coord(fine.node_pos(ix, iy, iz));
                let (bx, wx) = weights4(u[0]);
                let (by, wy) = weights4(u[1]);
                let (bz, wz) = weights4(u[2]);
                check_bounds(coarse.dims, [bx, by, bz])?;
                let mut acc = 0.0;
                for (dz, &wz) in wz.iter().enumerate() {
                    for (dy, &wy) in wy.iter().enumerate() {
                        let wyz = wy * wz;
                        let row =
                            coarse.flat(bx as usize, by as usize + dy, bz as usize + dz);
                        for (dx, &wx) in wx.iter().enumerate() {
                            acc += wx * wyz * coarse.potential[row + dx];
                        }
                    }
                }
                let idx = fine.flat(ix, iy, iz);
                fine.potential[idx] += acc;
            }
        }
    }
    Ok(())
}

/// Interpolate the finest-grid potential back to the atoms:
/// u_i = Σ_μ φ⁰_μ(r_i) u⁰_μ, together with its gradient ∇_{r_i} u_i.
pub fn interpolate(
    hierarchy: &GridHierarchy,
    system: &ParticleSystem,
) -> Result<(Vec<f64>, Vec<[f64; 3]>)> {
    let level = &hierarchy.levels[0];
    let inv_h = 1.0 / level.spacing;
    let n = system.len();
    let mut u_long = vec![0.0; n];
    let mut grad = vec![[0.0; 3]; n];

    for (atom, &p) in system.positions.iter().enumerate() {
        let u = level.grid_coord(p);
        let (bx, wx, dx_) = weights4_with_derivs(u[0]);
        let (by, wy, dy_) = weights4_with_derivs(u[1]);
        let (bz, wz, dz_) = weights4_with_derivs(u[2]);
        check_bounds(level.dims, [bx, by, bz]).map_err(|_| Error::Coverage { atom })?;
        let mut val = 0.0;
        let mut g = [0.0; 3];
        for iz in 0..4 {
            for iy in 0..4 {
                let row = level.flat(bx as usize, by as usize + iy, bz as usize + iz);
                for ix in 0..4 {
                    let node_u = level.potential[row + ix];
                    val += wx[ix] * wy[iy] * wz[iz] * node_u;
                    g[0] += dx_[ix] * wy[iy] * wz[iz] * node_u;
                    g[1] += wx[ix] * dy_[iy] * wz[iz] * node_u;
                    g[2] += wx[ix] * wy[iy] * dz_[iz] * node_u;
                }
            }
        }
        u_long[atom] = val;
        grad[atom] = [g[0] * inv_h, g[1] * inv_h, g[2] * inv_h];
    }
    Ok((u_long, grad))
}
