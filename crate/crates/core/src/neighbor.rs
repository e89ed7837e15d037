//! O(N) neighbor enumeration: link-cell binning plus Verlet lists with a
//! skin distance.
//!
//! The cell grid covers the bounding box of the atoms (open boundary, the
//! 27-cell stencil never wraps). A list built at `cutoff + skin` stays a
//! superset of the true pair set at `cutoff` while no atom has moved skin/2
//! from its build position.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::system::ParticleSystem;
use crate::Result;

/// Default skin distance in Å.
pub const DEFAULT_SKIN: f64 = 2.0;

/// Link-cell binning of atoms over the atom bounding box.
#[derive(Debug, Clone)]
pub struct CellGrid {
    pub cell_edge: f64,
    pub origin: [f64; 3],
    pub dims: [usize; 3],
    /// Atom indices per cell, flattened x-fastest.
    pub bins: Vec<Vec<usize>>,
}

impl CellGrid {
    #[inline]
    fn flat(&self, c: [usize; 3]) -> usize {
        (c[2] * self.dims[1] + c[1]) * self.dims[0] + c[0]
    }

    /// Cell coordinates for a position, clamped to the grid.
    #[inline]
    pub fn cell_of(&self, p: [f64; 3]) -> [usize; 3] {
        let mut c = [0usize; 3];
        for a in 0..3 {
            let u = math::floor((p[a] - self.origin[a]) / self.cell_edge);
            c[a] = (u.max(0.0) as usize).min(self.dims[a] - 1);
        }
        c
    }
}

/// Bin all atoms into cells of edge `cell_edge`.
pub fn build_cell_grid(system: &ParticleSystem, cell_edge: f64) -> Result<CellGrid> {
    if !(cell_edge > 0.0) || !cell_edge.is_finite() {
        return Err(Error::invalid("cell_edge must be positive and finite"));
    }
    for (i, p) in system.positions.iter().enumerate() {
        if !p.iter().all(|c| c.is_finite()) {
            return Err(Error::invalid(alloc::format!("non-finite position for atom {i}")));
        }
    }
    let (lo, hi) = system.bounding_box();
    let mut dims = [1usize; 3];
    for a in 0..3 {
        dims[a] = (math::floor((hi[a] - lo[a]) / cell_edge) as usize) + 1;
    }
    let mut grid = CellGrid {
        cell_edge,
        origin: lo,
        dims,
        bins: vec![Vec::new(); dims[0] * dims[1] * dims[2]],
    };
    for (i, &p) in system.positions.iter().enumerate() {
        let c = grid.cell_of(p);
        let idx = grid.flat(c);
        grid.bins[idx].push(i);
    }
    Ok(grid)
}

/// Verlet list: per-atom sorted neighbor indices `j > i`, built from a cell
/// grid at `cutoff + skin`, plus the position snapshot used for validity
/// checks.
#[derive(Debug, Clone)]
pub struct NeighborList {
    pub cutoff: f64,
    pub skin: f64,
    /// `pairs[i]` holds all j > i with build-time distance <= cutoff + skin.
    pub pairs: Vec<Vec<usize>>,
    pub build_positions: Vec<[f64; 3]>,
}

impl NeighborList {
    /// Iterate all pairs in deterministic (i, then sorted j) order.
    pub fn iter_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs
            .iter()
            .enumerate()
            .flat_map(|(i, js)| js.iter().map(move |&j| (i, j)))
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.iter().map(Vec::len).sum()
    }
}

/// Build a Verlet list containing exactly the pairs with distance
/// ≤ cutoff + skin, via the 27-cell stencil.
pub fn build_neighbor_list(
    system: &ParticleSystem,
    cutoff: f64,
    skin: f64,
) -> Result<NeighborList> {
    if !(cutoff > 0.0) {
        return Err(Error::invalid("cutoff must be positive"));
    }
    if !(skin >= 0.0) {
        return Err(Error::invalid("skin must be non-negative"));
    }
    let extended = cutoff + skin;
    let grid = build_cell_grid(system, extended)?;
    let ext2 = extended * extended;
    let n = system.len();
    let mut pairs = vec![Vec::new(); n];

    for cz in 0..grid.dims[2] {
        for cy in 0..grid.dims[1] {
            for cx in 0..grid.dims[0] {
                let home = grid.flat([cx, cy, cz]);
                if grid.bins[home].is_empty() {
                    continue;
                }
                for dz in -1i64..=1 {
                    for dy in -1i64..=1 {
                        for dx in -1i64..=1 {
                            let nx = cx as i64 + dx;
                            let ny = cy as i64 + dy;
                            let nz = cz as i64 + dz;
                            if nx < 0
                                || ny < 0
                                || nz < 0
                                || nx >= grid.dims[0] as i64
                                || ny >= grid.dims[1] as i64
                                || nz >= grid.dims[2] as i64
                            {
                                continue;
                            }
                            let other = grid.flat([nx as usize, ny as usize, nz as usize]);
                            for &i in &grid.bins[home] {
                                for &j in &grid.bins[other] {
                                    if j <= i {
                                        continue;
                                    }
                                    if math::dist2(system.positions[i], system.positions[j])
                                        <= ext2
                                    {
                                        pairs[i].push(j);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for js in &mut pairs {
        js.sort_unstable();
    }
    Ok(NeighborList {
        cutoff,
        skin,
        pairs,
        build_positions: system.positions.clone(),
    })
}

/// True while every atom has moved less than skin/2 from its build position,
/// which is sufficient for the list to stay complete at `cutoff`.
pub fn list_valid(list: &NeighborList, system: &ParticleSystem) -> bool {
    if list.build_positions.len() != system.len() {
        return false;
    }
    let half = list.skin * 0.5;
    let half2 = half * half;
    list.build_positions
        .iter()
        .zip(&system.positions)
        .all(|(&a, &b)| math::dist2(a, b) < half2)
}
