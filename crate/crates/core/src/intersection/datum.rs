use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::algebra::{binomial, Scalar, J};
use crate::error::Error;

use super::class::{ClassId, Divisor, Poly};
use super::table::IntersectionTable;

/// Numerical data of `f: (X, H) -> (B, L)` itself, before degenerating.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationDatum {
    pub n: usize,
    pub m: usize,
    /// `mixed_volumes[i] = H^{m+i} . L^{n-i}` for `i = 0..=n`.
    pub mixed_volumes: Vec<Option<Scalar>>,
    /// `canonical_products[b] = K . H^{n+m-1-b} . L^b` for `b = 0..=n`.
    /// Powers of `L` above `n` vanish and are not stored.
    pub canonical_products: Vec<Option<Scalar>>,
    /// Per-component data for a deminormal total space.
    pub components: Vec<FibrationDatum>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Whole,
    Fiber,
}

impl FibrationDatum {
    pub fn new(n: usize, m: usize, mixed: Vec<Scalar>, canon: Vec<Scalar>) -> Self {
        FibrationDatum {
            n,
            m,
            mixed_volumes: mixed.into_iter().map(Some).collect(),
            canonical_products: canon.into_iter().map(Some).collect(),
            components: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    pub fn mixed(&self, i: usize) -> Result<Scalar, Error> {
        if i > self.n {
            return Err(Error::IndexOutOfRange(format!("mixed volume {i} > n = {}", self.n)));
        }
        self.mixed_volumes
            .get(i)
            .cloned()
            .flatten()
            .ok_or_else(|| Error::MissingIntersectionNumber { monomial: format!("H^{}*L^{}", self.m + i, self.n - i) })
    }

    /// `K . H^{N-1-b} . L^b`, zero for `b > n`.
    pub fn canon(&self, b: usize) -> Result<Scalar, Error> {
        if b > self.n {
            return Ok(Scalar::zero());
        }
        if self.dim() == 0 || b + 1 > self.dim() {
            return Err(Error::IndexOutOfRange(format!("canonical product {b} in dimension {}", self.dim())));
        }
        self.canonical_products.get(b).cloned().flatten().ok_or_else(|| {
            Error::MissingIntersectionNumber { monomial: format!("K*H^{}*L^{}", self.dim() - 1 - b, b) }
        })
    }

    /// `V(H) = H^{n+m}`.
    pub fn volume(&self) -> Result<Scalar, Error> {
        self.mixed(self.n)
    }

    /// Data for the polarization `H + cL`; entries shift by binomials.
    pub fn twisted(&self, c: &Scalar) -> Self {
        let n = self.n;
        let mixed = (0..=n)
            .map(|i| {
                (0..=i)
                    .map(|k| {
                        let base = self.mixed_volumes.get(i - k).cloned().flatten()?;
                        Some(binomial::<Scalar>((self.m + i) as u64, k as i64) * pow(c, k) * base)
                    })
                    .sum::<Option<Scalar>>()
            })
            .collect();
        let top = self.dim().saturating_sub(1);
        let canon = (0..=n.min(top))
            .map(|b| {
                (0..=(n - b))
                    .map(|k| {
                        if b + k > n {
                            return Some(Scalar::zero());
                        }
                        let base = self.canonical_products.get(b + k).cloned().flatten()?;
                        Some(binomial::<Scalar>((top - b) as u64, k as i64) * pow(c, k) * base)
                    })
                    .sum::<Option<Scalar>>()
            })
            .collect();
        FibrationDatum {
            n,
            m: self.m,
            mixed_volumes: mixed,
            canonical_products: canon,
            components: self.components.iter().map(|c2| c2.twisted(c)).collect(),
        }
    }

    /// Data of a general member `D` of `|L|`, with `K_D = (K + L)|_D`.
    pub fn hyperplane_cut(&self) -> Result<Self, Error> {
        if self.n == 0 {
            return Err(Error::DimensionMismatch("cannot cut a fibration over a point".into()));
        }
        let n2 = self.n - 1;
        let mixed = (0..=n2).map(|i| self.mixed_volumes.get(i).cloned().flatten()).collect();
        let canon = (0..=n2)
            .map(|b| {
                let k = self.canonical_products.get(b + 1).cloned().flatten()?;
                let extra = if b + 2 <= self.n {
                    self.mixed_volumes.get(self.n - 2 - b).cloned().flatten()?
                } else {
                    Scalar::zero()
                };
                Some(k + extra)
            })
            .collect();
        Ok(FibrationDatum {
            n: n2,
            m: self.m,
            mixed_volumes: mixed,
            canonical_products: canon,
            components: self.components.iter().map(|c| c.hyperplane_cut()).collect::<Result<_, _>>()?,
        })
    }
}

fn pow(c: &Scalar, k: usize) -> Scalar {
    (0..k).fold(Scalar::from_integer(1.into()), |a, _| a * c.clone())
}

/// `S = -N (K . L^{N-1}) / L^N`, for the total space or a general fiber.
pub fn scalar_curvature(d: &FibrationDatum, which: Which) -> Result<Scalar, Error> {
    let (dim, k, vol) = match which {
        Which::Whole => (d.dim(), d.canon(0)?, d.mixed(d.n)?),
        Which::Fiber => {
            if d.m == 0 {
                return Err(Error::DimensionMismatch("fiber of relative dimension 0".into()));
            }
            (d.m, d.canon(d.n)?, d.mixed(0)?)
        }
    };
    if vol.is_zero() {
        return Err(Error::DegenerateVolume(format!("{which:?} volume is zero")));
    }
    Ok(-Scalar::from_integer((dim as i64).into()) * k / vol)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exceptional {
    pub class: ClassId,
    /// Multiplicity `b_E` of the component in the central fiber.
    pub b: u32,
    /// Log discrepancy `A(v_E)`.
    pub a: Scalar,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub normalized: bool,
    pub trivial: bool,
}

/// Which class combination plays which part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roles {
    /// Compactified polarization.
    pub polarization: Divisor,
    /// Pullback of the polarization of `X` to the compactification.
    pub base_pullback: Divisor,
    /// Relative log canonical class over the projective line.
    pub klog: Option<Divisor>,
    /// Pullback of `L` from the base; the direction of the `j` twist.
    pub twist: Option<Divisor>,
    /// Pullback of `K_(X, Delta)`; enables the direct `J^K` path.
    pub kpull: Option<Divisor>,
    /// `X_0 - X_0,red`; derived from the `b_E` when absent.
    pub excess: Option<Divisor>,
}

/// Intersection data of one compactified test configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestConfigDatum {
    pub n: usize,
    pub m: usize,
    pub variables: BTreeSet<String>,
    pub table: IntersectionTable,
    pub roles: Roles,
    pub exceptionals: Vec<Exceptional>,
    pub flags: Flags,
    pub fibration: FibrationDatum,
}

impl TestConfigDatum {
    /// `N = dim X`.
    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    pub fn volume(&self) -> Result<Scalar, Error> {
        let v = self.fibration.volume()?;
        if !v.is_positive() {
            return Err(Error::DegenerateVolume(format!("V = {v}")));
        }
        Ok(v)
    }

    pub fn klog(&self) -> Result<&Divisor, Error> {
        self.roles.klog.as_ref().ok_or_else(|| Error::MissingData("roles.klog".into()))
    }

    pub fn twist(&self) -> Result<Divisor, Error> {
        match (&self.roles.twist, self.n) {
            (Some(d), _) => Ok(d.clone()),
            (None, 0) => Ok(Divisor::zero()),
            (None, _) => Err(Error::MissingData("roles.twist (needed when n > 0)".into())),
        }
    }

    /// The divisor `X_0 - X_0,red`.
    pub fn excess_divisor(&self) -> Divisor {
        match &self.roles.excess {
            Some(d) => d.clone(),
            None => self.exceptionals.iter().fold(Divisor::zero(), |d, e| {
                d.plus(&e.class, Poly::constant(Scalar::from_integer((e.b as i64 - 1).into())))
            }),
        }
    }

    /// Same configuration polarized by `H + cL`.
    pub fn twisted(&self, c: &Scalar) -> Result<Self, Error> {
        let l = self.twist()?.scale(&Poly::constant(c.clone()));
        let mut out = self.clone();
        out.roles.polarization = self.roles.polarization.add(&l);
        out.roles.base_pullback = self.roles.base_pullback.add(&l);
        out.fibration = self.fibration.twisted(c);
        Ok(out)
    }

    /// Restriction to a general member of `|L|`.
    pub fn hyperplane_cut(&self) -> Result<Self, Error> {
        let l = self.twist()?;
        if self.n == 0 {
            return Err(Error::DimensionMismatch("cannot cut a fibration over a point".into()));
        }
        let mut out = self.clone();
        out.n = self.n - 1;
        out.table = self.table.cut(&l);
        out.fibration = self.fibration.hyperplane_cut()?;
        out.roles.klog = self.roles.klog.as_ref().map(|k| k.add(&l));
        out.roles.kpull = self.roles.kpull.as_ref().map(|k| k.add(&l));
        out.flags.trivial = false;
        Ok(out)
    }

    /// Cut `times` times, leaving a base of dimension `n - times`.
    pub fn cut_times(&self, times: usize) -> Result<Self, Error> {
        (0..times).try_fold(self.clone(), |d, _| d.hyperplane_cut())
    }

    /// Class renaming; values must not change.
    pub fn rename_classes(&self, map: &BTreeMap<String, String>) -> Self {
        let r = |d: &Divisor| d.rename(map);
        TestConfigDatum {
            n: self.n,
            m: self.m,
            variables: self.variables.clone(),
            table: self.table.rename(map),
            roles: Roles {
                polarization: r(&self.roles.polarization),
                base_pullback: r(&self.roles.base_pullback),
                klog: self.roles.klog.as_ref().map(r),
                twist: self.roles.twist.as_ref().map(r),
                kpull: self.roles.kpull.as_ref().map(r),
                excess: self.roles.excess.as_ref().map(r),
            },
            exceptionals: self
                .exceptionals
                .iter()
                .map(|e| Exceptional {
                    class: map.get(&e.class).cloned().unwrap_or_else(|| e.class.clone()),
                    b: e.b,
                    a: e.a.clone(),
                })
                .collect(),
            flags: self.flags,
            fibration: self.fibration.clone(),
        }
    }
}

/// `sum_k C(total, k) j^k (aux . H^{total-k} . L^k)` with `H` the
/// polarization and `L` the twist.
///
/// Without `aux`, `total` must be the table degree; with it, one less.
pub fn expand_twisted_power(
    d: &TestConfigDatum,
    aux: Option<&Divisor>,
    total: u32,
) -> Result<Poly, Error> {
    let pol = &d.roles.polarization;
    let l = d.twist()?;
    let mut acc = Poly::zero();
    // L is pulled back from an n-dimensional base, so higher powers die;
    // they are still looked up so a table that disagrees is caught.
    for k in 0..=total {
        if l.is_zero() && k > 0 {
            break;
        }
        let mut factors: Vec<(&Divisor, u32)> = vec![(pol, total - k), (&l, k)];
        if let Some(a) = aux {
            factors.push((a, 1));
        }
        let v = d.table.intersect(&factors)?;
        if v.is_zero() {
            continue;
        }
        let jk = Poly::var(J).pow(k);
        acc = acc + (jk * v).scale(&binomial::<Scalar>(total as u64, k as i64));
    }
    Ok(acc)
}
