//! Exact arithmetic in the center of the rational group algebra of `S_d`.
//!
//! Elements are rational coefficient vectors over the conjugacy-class basis
//! `{K_sigma}`. Basis products are computed once per `(alpha, beta)` by full
//! convolution over the two classes and memoized in a per-`d` table.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, RwLock};

use num::{BigInt, BigRational, BigUint, One, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::monodromy::conjugacy_classes;
use crate::partition::{factorial, Partition, RamificationProfile};

/// Coefficients of `K_alpha K_beta` over the class basis.
pub type BasisProduct = BTreeMap<Partition, BigUint>;

/// Memoized structure constants of the class algebra of `S_d`.
///
/// Concurrent lookups are permitted; a missing entry may be computed twice,
/// but both computations produce the same table, so the insert is idempotent.
pub struct StructureConstantTable {
    d: usize,
    products: RwLock<HashMap<(Partition, Partition), Arc<BasisProduct>>>,
}

impl StructureConstantTable {
    fn new(d: usize) -> Self {
        StructureConstantTable {
            d,
            products: RwLock::new(HashMap::new()),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `K_alpha K_beta` expanded over the basis. The class algebra is
    /// commutative, so entries are stored under the sorted key.
    pub fn product(&self, alpha: &Partition, beta: &Partition) -> Arc<BasisProduct> {
        let key = if alpha <= beta {
            (alpha.clone(), beta.clone())
        } else {
            (beta.clone(), alpha.clone())
        };
        if let Some(entry) = self.products.read().unwrap().get(&key) {
            return entry.clone();
        }
        let computed = Arc::new(convolve(self.d, &key.0, &key.1));
        let mut write = self.products.write().unwrap();
        write.entry(key).or_insert(computed).clone()
    }
}

// full convolution: classify the product of every ordered pair. The tally
// for a class gamma counts pairs landing anywhere in it, which is the
// structure constant times |K_gamma| (products are equidistributed over a
// conjugacy class by centrality).
fn convolve(d: usize, alpha: &Partition, beta: &Partition) -> BasisProduct {
    let classes = conjugacy_classes(d);
    let mut tally: BTreeMap<Partition, u64> = BTreeMap::new();
    for a in &classes[alpha] {
        for b in &classes[beta] {
            *tally.entry(a.then(b).cycle_type()).or_insert(0) += 1;
        }
    }
    tally
        .into_iter()
        .map(|(gamma, count)| {
            let size = gamma.class_size();
            let count = BigUint::from(count);
            debug_assert!((&count % &size).is_zero());
            let coeff = count / size;
            (gamma, coeff)
        })
        .collect()
}

/// The shared per-`d` table.
pub fn table(d: usize) -> Arc<StructureConstantTable> {
    static TABLES: Lazy<Mutex<HashMap<usize, Arc<StructureConstantTable>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    let mut tables = TABLES.lock().unwrap();
    tables
        .entry(d)
        .or_insert_with(|| Arc::new(StructureConstantTable::new(d)))
        .clone()
}

/// An element of the class algebra: rational coefficients over `{K_sigma}`.
/// Zero coefficients are absent from the map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralElement {
    d: usize,
    coeffs: BTreeMap<Partition, BigRational>,
}

impl CentralElement {
    pub fn zero(d: usize) -> Self {
        CentralElement {
            d,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis element `K_sigma`.
    pub fn basis(sigma: Partition) -> Self {
        let d = sigma.d();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(sigma, BigRational::one());
        CentralElement { d, coeffs }
    }

    pub fn from_coeffs(d: usize, coeffs: BTreeMap<Partition, BigRational>) -> Result<Self> {
        for sigma in coeffs.keys() {
            if sigma.d() != d {
                return Err(Error::MixedDegrees {
                    left: d,
                    right: sigma.d(),
                });
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(CentralElement { d, coeffs })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, sigma: &Partition) -> BigRational {
        self.coeffs
            .get(sigma)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of the identity class `(1^d)`.
    pub fn trace(&self) -> BigRational {
        self.coeff(&Partition::identity(self.d))
    }
}

/// Bilinear product over memoized basis products.
pub fn multiply(a: &CentralElement, b: &CentralElement) -> Result<CentralElement> {
    if a.d() != b.d() {
        return Err(Error::MixedDegrees {
            left: a.d(),
            right: b.d(),
        });
    }
    let table = table(a.d());
    let mut coeffs: BTreeMap<Partition, BigRational> = BTreeMap::new();
    for (alpha, ca) in &a.coeffs {
        for (beta, cb) in &b.coeffs {
            let scale = ca * cb;
            for (gamma, m) in table.product(alpha, beta).iter() {
                let term = &scale * BigRational::from(BigInt::from(m.clone()));
                let entry = coeffs
                    .entry(gamma.clone())
                    .or_insert_with(BigRational::zero);
                *entry += term;
            }
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(CentralElement { d: a.d(), coeffs })
}

pub fn trace(x: &CentralElement) -> BigRational {
    x.trace()
}

/// `tr(K_{sigma_1} ... K_{sigma_n})`, always a nonnegative integer.
pub fn trace_product(profile: &RamificationProfile) -> BigUint {
    let sigmas = profile.partitions();
    let mut acc = CentralElement::basis(sigmas[0].clone());
    for sigma in &sigmas[1..] {
        acc = multiply(&acc, &CentralElement::basis(sigma.clone()))
            .expect("profile partitions share d");
    }
    let t = acc.trace();
    debug_assert!(t.is_integer() && t >= BigRational::zero());
    t.to_integer()
        .to_biguint()
        .expect("trace of a class product is a nonnegative integer")
}

/// `h(sigma-bar) = tr(K_{sigma_1} ... K_{sigma_n}) / d!`.
pub fn hurwitz_number(profile: &RamificationProfile) -> BigRational {
    BigRational::new(
        BigInt::from(trace_product(profile)),
        BigInt::from(factorial(profile.d())),
    )
}

/// `I(v) = tr(K_{mu_1} K_{mu_2} K_{mu_3})`; the vertex is acceptable iff
/// the result is nonzero.
pub fn triple_index(mu1: &Partition, mu2: &Partition, mu3: &Partition) -> Result<BigUint> {
    if mu1.d() != mu2.d() || mu1.d() != mu3.d() {
        return Err(Error::MixedDegrees {
            left: mu1.d(),
            right: if mu1.d() != mu2.d() { mu2.d() } else { mu3.d() },
        });
    }
    let ab = multiply(
        &CentralElement::basis(mu1.clone()),
        &CentralElement::basis(mu2.clone()),
    )?;
    let abc = multiply(&ab, &CentralElement::basis(mu3.clone()))?;
    let t = abc.trace();
    debug_assert!(t.is_integer() && t >= BigRational::zero());
    Ok(t.to_integer()
        .to_biguint()
        .expect("triple index is a nonnegative integer"))
}

/// Frobenius pairing `h(a, b) = tr(ab)`.
pub fn frobenius_pairing(a: &CentralElement, b: &CentralElement) -> Result<BigRational> {
    Ok(multiply(a, b)?.trace())
}
