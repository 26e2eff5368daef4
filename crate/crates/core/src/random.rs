//! Seeded random instances for property tests and CLI cross-checks.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::corr::{from_partial_automorphism, BlockPair, Correspondence, PartialAutomorphism};
use crate::fdalg::{AlgElement, FdAlgebra};
use crate::graph::Graph;
use crate::hmod::{HilbertModule, ModuleElement, ModuleOperator};
use crate::linalg::{c64, CMatrix, C64};

pub struct Sampler {
    rng: StdRng,
}

impl Sampler {
    pub fn seeded(seed: u64) -> Self {
        Self {
            rng: StdRng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut StdRng {
        &mut self.rng
    }

    /// Uniform on the square `[-1, 1] + i[-1, 1]`.
    pub fn scalar(&mut self) -> C64 {
        c64(self.rng.gen_range(-1.0..=1.0), self.rng.gen_range(-1.0..=1.0))
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.scalar())
    }

    pub fn hermitian(&mut self, n: usize) -> CMatrix {
        let m = self.matrix(n, n);
        (&m + m.adjoint()).scale(0.5)
    }

    /// A unitary from the QR factorization of a random matrix.
    pub fn unitary(&mut self, n: usize) -> CMatrix {
        if n == 0 {
            return CMatrix::zeros(0, 0);
        }
        loop {
            let m = self.matrix(n, n);
            let qr = m.qr();
            if qr.r().diagonal().iter().all(|d| d.norm_sqr() > 1e-6) {
                return qr.q();
            }
        }
    }

    pub fn algebra(&mut self, max_blocks: usize, max_size: usize) -> FdAlgebra {
        let m = self.rng.gen_range(1..=max_blocks);
        FdAlgebra::new((0..m).map(|_| self.rng.gen_range(1..=max_size)).collect()).expect("positive sizes")
    }

    pub fn element(&mut self, algebra: &FdAlgebra) -> AlgElement {
        let blocks = algebra.blocks().iter().map(|&n| self.matrix(n, n)).collect();
        algebra.element(blocks).expect("shapes match")
    }

    pub fn module_element(&mut self, module: &HilbertModule) -> ModuleElement {
        let blocks = module
            .fibers()
            .iter()
            .zip(module.algebra().blocks())
            .map(|(&k, &n)| self.matrix(k, n))
            .collect();
        module.element(blocks).expect("shapes match")
    }

    pub fn module_operator(&mut self, module: &HilbertModule) -> ModuleOperator {
        let blocks = module.fibers().iter().map(|&k| self.matrix(k, k)).collect();
        module.operator(blocks).expect("shapes match")
    }

    /// A correspondence over a random algebra, fibers at most `max_fiber`.
    pub fn correspondence(&mut self, max_blocks: usize, max_size: usize, max_fiber: usize) -> Correspondence {
        let algebra = self.algebra(max_blocks, max_size);
        self.correspondence_over(&algebra, max_fiber)
    }

    /// A correspondence over `algebra`: random multiplicities (some columns
    /// zero, some fibers padded), random unitaries about half the time.
    pub fn correspondence_over(&mut self, algebra: &FdAlgebra, max_fiber: usize) -> Correspondence {
        let m = algebra.num_blocks();
        let mut fibers = Vec::with_capacity(m);
        let mut multiplicity = Vec::with_capacity(m);
        for _ in 0..m {
            let mut row: Vec<usize> = (0..m).map(|_| self.rng.gen_range(0..=2)).collect();
            let used = |row: &[usize]| -> usize { row.iter().zip(algebra.blocks()).map(|(c, n)| c * n).sum() };
            while used(&row) > max_fiber {
                let i = self.rng.gen_range(0..m);
                row[i] = row[i].saturating_sub(1);
            }
            let u = used(&row);
            let pad = if self.rng.gen_bool(0.3) {
                self.rng.gen_range(0..=max_fiber - u)
            } else {
                0
            };
            fibers.push(u + pad);
            multiplicity.push(row);
        }
        let unitaries = if self.rng.gen_bool(0.5) {
            Some(fibers.iter().map(|&k| self.unitary(k)).collect())
        } else {
            None
        };
        Correspondence::from_parts(algebra.blocks().to_vec(), fibers, multiplicity, unitaries).expect("valid sample")
    }

    /// A random partial automorphism: a size-preserving partial bijection of
    /// blocks with random unitaries.
    pub fn partial_automorphism(&mut self, algebra: &FdAlgebra) -> PartialAutomorphism {
        let m = algebra.num_blocks();
        let mut targets: Vec<usize> = (0..m).collect();
        let mut pairs = Vec::new();
        for i in 0..m {
            if !self.rng.gen_bool(0.7) {
                continue;
            }
            let candidates: Vec<usize> = targets
                .iter()
                .copied()
                .filter(|&j| algebra.block_size(j) == algebra.block_size(i))
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let j = candidates[self.rng.gen_range(0..candidates.len())];
            targets.retain(|&t| t != j);
            let unitary = self.rng.gen_bool(0.5).then(|| self.unitary(algebra.block_size(i)));
            pairs.push(BlockPair {
                from: i,
                to: j,
                unitary,
            });
        }
        PartialAutomorphism {
            domain: algebra.ideal(pairs.iter().map(|p| p.from)).expect("block indices"),
            range: algebra.ideal(pairs.iter().map(|p| p.to)).expect("block indices"),
            pairs,
        }
    }

    /// A Hilbert bimodule: every one is the correspondence of a partial
    /// automorphism, up to unitary equivalence.
    pub fn bimodule(&mut self, max_blocks: usize, max_size: usize) -> Correspondence {
        let algebra = self.algebra(max_blocks, max_size);
        let theta = self.partial_automorphism(&algebra);
        from_partial_automorphism(&algebra, &theta).expect("valid sample")
    }

    /// A finite graph on `1..=max_vertices` vertices with at most `max_edges`
    /// edges. Vertices are `v0, v1, …`, edges `e0, e1, …`.
    pub fn graph(&mut self, max_vertices: usize, max_edges: usize) -> Graph {
        let nv = self.rng.gen_range(1..=max_vertices);
        let ne = self.rng.gen_range(0..=max_edges);
        let vertices: Vec<String> = (0..nv).map(|v| format!("v{v}")).collect();
        let edges = (0..ne)
            .map(|e| {
                let s = self.rng.gen_range(0..nv);
                let r = self.rng.gen_range(0..nv);
                (format!("e{e}"), vertices[s].clone(), vertices[r].clone())
            })
            .collect();
        Graph::new(vertices, edges, Vec::new()).expect("valid sample")
    }
}
