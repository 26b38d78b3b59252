use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::expm::expm;
use super::{pair_cutoff, poisson_cutoff, BasisConfig, ModeIndex, Occupation, OneBodyOperator};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Create,
    Annihilate,
}

/// State vector on a truncated basis.
///
/// `leakage` accumulates the squared norm of every component an operation pushed
/// above a cutoff. For norm-preserving operations on a normalized input it equals
/// `1 - |psi|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    basis: BasisConfig,
    amplitudes: Vec<C64>,
    leakage: f64,
}

/// JSON state dump in the basis index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDump {
    pub cutoffs: [usize; 4],
    pub amplitudes: Vec<[f64; 2]>,
}

/// Components dropped at the cutoff boundary, keyed by their out-of-range occupation.
#[derive(Default)]
struct Spill(HashMap<Occupation, C64>);

impl Spill {
    fn add(&mut self, occ: Occupation, z: C64) {
        *self.0.entry(occ).or_default() += z;
    }

    fn mass(&self) -> f64 {
        self.0.values().map(|z| z.norm_sqr()).sum()
    }
}

impl PureState {
    pub fn vacuum(basis: &BasisConfig) -> Self {
        Self::fock(basis, [0; 4]).expect("vacuum is in every basis")
    }

    /// Number state `|n_Hh, n_Hv, n_Vh, n_Vv>`.
    pub fn fock(basis: &BasisConfig, occ: Occupation) -> Result<Self> {
        let index = basis.index_of(&occ).ok_or_else(|| {
            let m = (0..4).find(|&m| occ[m] > basis.cutoffs()[m]).unwrap();
            Error::CutoffTooSmall {
                mode: ModeIndex::ALL[m],
                cutoff: basis.cutoffs()[m],
                required: occ[m],
            }
        })?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); basis.dim()];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            basis: basis.clone(),
            amplitudes,
            leakage: 0.0,
        })
    }

    pub fn from_amplitudes(basis: &BasisConfig, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("expected {} entries, got {}", basis.dim(), amplitudes.len()),
            });
        }
        Ok(Self {
            basis: basis.clone(),
            amplitudes,
            leakage: 0.0,
        })
    }

    pub fn basis(&self) -> &BasisConfig {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude on `occ`, zero if it lies outside the basis.
    pub fn amplitude(&self, occ: Occupation) -> C64 {
        self.basis
            .index_of(&occ)
            .map(|i| self.amplitudes[i])
            .unwrap_or_default()
    }

    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if !self.basis.same_space(&other.basis) {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|self - other|`.
    pub fn distance(&self, other: &PureState) -> Result<f64> {
        if !self.basis.same_space(&other.basis) {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            basis: self.basis.clone(),
            amplitudes: self.amplitudes.iter().map(|z| z * factor).collect(),
            leakage: self.leakage * factor.norm_sqr(),
        }
    }

    /// Elementwise sum; leakages add.
    pub fn added(&self, other: &PureState) -> Result<Self> {
        if !self.basis.same_space(&other.basis) {
            return Err(Error::BasisMismatch);
        }
        Ok(Self {
            basis: self.basis.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
            leakage: self.leakage + other.leakage,
        })
    }

    /// Copies the state into a basis whose cutoffs are all at least as large.
    pub fn embedded(&self, basis: &BasisConfig) -> Result<Self> {
        for m in ModeIndex::ALL {
            basis.require_cutoff(m, self.basis.cutoff(m))?;
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); basis.dim()];
        for (i, z) in self.amplitudes.iter().enumerate() {
            if *z != C64::new(0.0, 0.0) {
                let j = basis
                    .index_of(&self.basis.occupation(i))
                    .expect("larger basis");
                amplitudes[j] = *z;
            }
        }
        Ok(Self {
            basis: basis.clone(),
            amplitudes,
            leakage: self.leakage,
        })
    }

    pub fn mean_occupation(&self, m: ModeIndex) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, z)| z.norm_sqr() * self.basis.occupation(i)[m.index()] as f64)
            .sum()
    }

    /// Probability of each total photon number `0..=sum(cutoffs)`.
    pub fn total_number_distribution(&self) -> Vec<f64> {
        let max: usize = self.basis.cutoffs().iter().sum();
        let mut p = vec![0.0; max + 1];
        for (i, z) in self.amplitudes.iter().enumerate() {
            p[self.basis.occupation(i).iter().sum::<usize>()] += z.norm_sqr();
        }
        p
    }

    fn with_spill(&self, amplitudes: Vec<C64>, spill: &Spill) -> Self {
        Self {
            basis: self.basis.clone(),
            amplitudes,
            leakage: self.leakage + spill.mass(),
        }
    }

    /// Applies `a_m` or `a_m^dagger`; the result is not renormalized.
    pub fn apply_ladder(&self, m: ModeIndex, kind: LadderKind) -> Self {
        let mi = m.index();
        let cutoff = self.basis.cutoff(m);
        let stride = self.basis.stride(mi);
        let mut out = vec![C64::new(0.0, 0.0); self.basis.dim()];
        let mut spill = Spill::default();
        for (i, z) in self.amplitudes.iter().enumerate() {
            if *z == C64::new(0.0, 0.0) {
                continue;
            }
            let n = (i / stride) % (cutoff + 1);
            match kind {
                LadderKind::Annihilate if n > 0 => out[i - stride] += z * (n as f64).sqrt(),
                LadderKind::Annihilate => {}
                LadderKind::Create if n < cutoff => out[i + stride] += z * ((n + 1) as f64).sqrt(),
                LadderKind::Create => {
                    let mut occ = self.basis.occupation(i);
                    occ[mi] += 1;
                    spill.add(occ, z * ((n + 1) as f64).sqrt());
                }
            }
        }
        self.with_spill(out, &spill)
    }

    /// Applies `sum_jk B_jk a_j^dagger a_k`; the result is not renormalized.
    ///
    /// Fails if the mass pushed above the cutoffs exceeds the basis epsilon.
    pub fn apply_one_body(&self, op: &OneBodyOperator) -> Result<Self> {
        let terms = op.terms();
        let cutoffs = self.basis.cutoffs();
        let mut out = vec![C64::new(0.0, 0.0); self.basis.dim()];
        let mut spill = Spill::default();
        for (i, z) in self.amplitudes.iter().enumerate() {
            if *z == C64::new(0.0, 0.0) {
                continue;
            }
            let occ = self.basis.occupation(i);
            for &(j, k, b) in &terms {
                let nk = occ[k];
                if nk == 0 {
                    continue;
                }
                if j == k {
                    out[i] += z * b * nk as f64;
                    continue;
                }
                let nj = occ[j];
                let amp = z * b * ((nk * (nj + 1)) as f64).sqrt();
                if nj == cutoffs[j] {
                    let mut target = occ;
                    target[k] -= 1;
                    target[j] += 1;
                    spill.add(target, amp);
                } else {
                    let target = i + self.basis.stride(j) - self.basis.stride(k);
                    out[target] += amp;
                }
            }
        }
        let dropped = spill.mass();
        if dropped > self.basis.epsilon() {
            let worst = spill
                .0
                .iter()
                .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
                .map(|(occ, _)| occ)
                .expect("nonzero spill");
            let m = (0..4).find(|&m| worst[m] > cutoffs[m]).unwrap();
            return Err(Error::Truncation {
                mode: ModeIndex::ALL[m],
                leakage: dropped,
                epsilon: self.basis.epsilon(),
                required_cutoff: Some(worst[m]),
            });
        }
        Ok(self.with_spill(out, &spill))
    }

    /// Applies `exp(u a_m^dagger - u* a_m)`.
    ///
    /// The generator is exponentiated on a working space padded beyond the cutoff
    /// and the result projected back; what lands above the cutoff is leakage.
    pub fn displace(&self, m: ModeIndex, u: C64) -> Result<Self> {
        if u == C64::new(0.0, 0.0) {
            return Ok(self.clone());
        }
        let mi = m.index();
        let cutoff = self.basis.cutoff(m);
        let stride = self.basis.stride(mi);
        let mag = u.norm();
        let margin = (mag * mag + 10.0 * mag + 20.0).ceil() as usize;
        let work = cutoff + 1 + margin;

        let mut generator = DMatrix::<C64>::zeros(work, work);
        for n in 0..work - 1 {
            let s = ((n + 1) as f64).sqrt();
            generator[(n + 1, n)] = u * s;
            generator[(n, n + 1)] = -u.conj() * s;
        }
        let d = expm(&generator);

        let mut out = vec![C64::new(0.0, 0.0); self.basis.dim()];
        let mut dropped = 0.0;
        let mut highest = 0;
        let mut fiber = vec![C64::new(0.0, 0.0); cutoff + 1];
        for base in 0..self.basis.dim() {
            if !(base / stride).is_multiple_of(cutoff + 1) {
                continue;
            }
            let mut occupied = false;
            for (n, f) in fiber.iter_mut().enumerate() {
                *f = self.amplitudes[base + n * stride];
                if *f != C64::new(0.0, 0.0) {
                    occupied = true;
                    highest = highest.max(n);
                }
            }
            if !occupied {
                continue;
            }
            for row in 0..work {
                let z: C64 = fiber.iter().enumerate().map(|(n, f)| d[(row, n)] * f).sum();
                if row <= cutoff {
                    out[base + row * stride] = z;
                } else {
                    dropped += z.norm_sqr();
                }
            }
        }
        if dropped > self.basis.epsilon() {
            return Err(Error::Truncation {
                mode: m,
                leakage: dropped,
                epsilon: self.basis.epsilon(),
                required_cutoff: Some(
                    highest + poisson_cutoff(mag * mag, self.basis.epsilon()) + 1,
                ),
            });
        }
        Ok(Self {
            basis: self.basis.clone(),
            amplitudes: out,
            leakage: self.leakage + dropped,
        })
    }

    /// Applies `exp((zeta* a_A a_B - zeta a_A^dagger a_B^dagger) / 2)`.
    ///
    /// The generator conserves `n_A - n_B`, so it is exponentiated block by block
    /// on a padded working space, only for the blocks the input occupies.
    pub fn two_mode_squeeze(
        &self,
        mode_a: ModeIndex,
        mode_b: ModeIndex,
        zeta: C64,
    ) -> Result<Self> {
        if mode_a == mode_b {
            return Err(Error::InvalidParameter {
                name: "modes",
                reason: "two-mode squeezing needs two distinct modes".into(),
            });
        }
        if zeta == C64::new(0.0, 0.0) {
            return Ok(self.clone());
        }
        let xi = zeta / 2.0;
        let r = xi.norm();
        let (ai, bi) = (mode_a.index(), mode_b.index());
        let (ca, cb) = (self.basis.cutoff(mode_a), self.basis.cutoff(mode_b));
        let (sa, sb) = (self.basis.stride(ai), self.basis.stride(bi));
        let t2 = r.tanh().powi(2);
        let margin = if t2 > 0.0 {
            ((-42.0 / t2.ln()).ceil() as usize).min(400) + 8
        } else {
            8
        };
        let (wa, wb) = (ca + 1 + margin, cb + 1 + margin);

        // block d = n_A - n_B, position i <-> (i + max(d,0), i + max(-d,0))
        let offsets = |d: i64| (d.max(0) as usize, (-d).max(0) as usize);
        let block_len = |d: i64, la: usize, lb: usize| {
            let (oa, ob) = offsets(d);
            (la.saturating_sub(oa)).min(lb.saturating_sub(ob))
        };
        let mut blocks: HashMap<i64, DMatrix<C64>> = HashMap::new();
        let mut block_for = |d: i64| -> DMatrix<C64> {
            blocks
                .entry(d)
                .or_insert_with(|| {
                    let (oa, ob) = offsets(d);
                    let len = block_len(d, wa, wb);
                    let mut g = DMatrix::<C64>::zeros(len, len);
                    for i in 0..len - 1 {
                        let s = (((i + 1 + oa) * (i + 1 + ob)) as f64).sqrt();
                        g[(i, i + 1)] = xi.conj() * s;
                        g[(i + 1, i)] = -xi * s;
                    }
                    expm(&g)
                })
                .clone()
        };

        let mut out = vec![C64::new(0.0, 0.0); self.basis.dim()];
        let mut dropped = 0.0;
        let mut highest = 0;
        for base in 0..self.basis.dim() {
            if (base / sa) % (ca + 1) != 0 || (base / sb) % (cb + 1) != 0 {
                continue;
            }
            for d in -(cb as i64)..=(ca as i64) {
                let (oa, ob) = offsets(d);
                let len_in = block_len(d, ca + 1, cb + 1);
                let input: Vec<C64> = (0..len_in)
                    .map(|i| self.amplitudes[base + (i + oa) * sa + (i + ob) * sb])
                    .collect();
                let top = match input.iter().rposition(|z| *z != C64::new(0.0, 0.0)) {
                    Some(t) => t,
                    None => continue,
                };
                highest = highest.max(top + oa.max(ob));
                let e = block_for(d);
                for row in 0..e.nrows() {
                    let z: C64 = input[..=top]
                        .iter()
                        .enumerate()
                        .map(|(i, f)| e[(row, i)] * f)
                        .sum();
                    if row < len_in {
                        out[base + (row + oa) * sa + (row + ob) * sb] = z;
                    } else {
                        dropped += z.norm_sqr();
                    }
                }
            }
        }
        if dropped > self.basis.epsilon() {
            let worse = if ca <= cb { mode_a } else { mode_b };
            return Err(Error::Truncation {
                mode: worse,
                leakage: dropped,
                epsilon: self.basis.epsilon(),
                required_cutoff: Some(highest + pair_cutoff(r, self.basis.epsilon()) + 1),
            });
        }
        Ok(Self {
            basis: self.basis.clone(),
            amplitudes: out,
            leakage: self.leakage + dropped,
        })
    }

    pub fn dump(&self) -> StateDump {
        StateDump {
            cutoffs: self.basis.cutoffs(),
            amplitudes: self.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_dump(dump: &StateDump) -> Result<Self> {
        let basis = BasisConfig::new(dump.cutoffs)?;
        Self::from_amplitudes(
            &basis,
            dump.amplitudes
                .iter()
                .map(|[re, im]| C64::new(*re, *im))
                .collect(),
        )
    }
}
