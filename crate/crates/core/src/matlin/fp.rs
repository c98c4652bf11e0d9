//! Residue-level kernels used by the exhaustive sweeps.

/// Precomputed arithmetic for `GF(p)` on raw `u32` residues.
#[derive(Debug, Clone)]
pub struct ResidueField {
    p: u32,
    inv: Vec<u32>,
}

impl ResidueField {
    pub fn new(p: u32) -> Self {
        // a^(p-2) for small p; table only up to 2^16
        let inv = if p <= 1 << 16 {
            (0..p).map(|a| if a == 0 { 0 } else { pow_mod(a, p - 2, p) }).collect()
        } else {
            Vec::new()
        };
        ResidueField { p, inv }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        if self.inv.is_empty() {
            pow_mod(a, self.p - 2, self.p)
        } else {
            self.inv[a as usize]
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
}

fn pow_mod(mut a: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let m = p as u64;
    let mut base = a as u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    a = acc as u32;
    a
}

/// Rank of a row-major `rows x cols` residue matrix. Destroys `m`.
pub fn residue_rank(field: &ResidueField, m: &mut [u32], rows: usize, cols: usize) -> usize {
    debug_assert_eq!(m.len(), rows * cols);
    let p = field.p as u64;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in c..cols {
                m.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = field.inv(m[rank * cols + c]) as u64;
        for i in rank + 1..rows {
            let lead = m[i * cols + c];
            if lead == 0 {
                continue;
            }
            let factor = p - (lead as u64 * inv % p);
            for j in c..cols {
                let v = m[rank * cols + j];
                if v != 0 {
                    m[i * cols + j] = ((m[i * cols + j] as u64 + factor * v as u64) % p) as u32;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn residue_rref(field: &ResidueField, m: &mut [u32], rows: usize, cols: usize) -> Vec<usize> {
    let p = field.p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                m.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(m[r * cols + c]) as u64;
        for j in c..cols {
            m[r * cols + j] = (m[r * cols + j] as u64 * inv % p) as u32;
        }
        for i in 0..rows {
            let lead = m[i * cols + c];
            if i == r || lead == 0 {
                continue;
            }
            let factor = p - lead as u64;
            for j in c..cols {
                let v = m[r * cols + j];
                if v != 0 {
                    m[i * cols + j] = ((m[i * cols + j] as u64 + factor * v as u64) % p) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{v : M v = 0}` of a residue matrix.
pub fn residue_kernel(field: &ResidueField, m: &[u32], rows: usize, cols: usize) -> Vec<Vec<u32>> {
    let mut work = m.to_vec();
    let pivots = residue_rref(field, &mut work, rows, cols);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = field.neg(work[r * cols + free]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_table() {
        let f = ResidueField::new(7);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        let big = ResidueField::new(2_147_483_647);
        assert_eq!(big.mul(12345, big.inv(12345)), 1);
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = ResidueField::new(5);
        let m = [1, 2, 3, 2, 4, 1];
        let k = residue_kernel(&f, &m, 2, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in 0..2 {
                let s = (0..3).fold(0, |acc, c| f.add(acc, f.mul(m[r * 3 + c], v[c])));
                assert_eq!(s, 0);
            }
        }
    }
}
