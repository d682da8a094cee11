use std::cell::OnceCell;
use std::collections::{HashMap, HashSet};

use crate::arith::{factorize, isqrt_u64};
use crate::error::{Error, Result};
use crate::normlocal::{Cycle, CycleChoice};

use super::form::{compose_reduced, reduce, reduce_unchecked, rho, QuadraticForm, Wide};
use super::{FundamentalDiscriminant, DEFAULT_BOUND};

/// The narrow form class group of a fundamental discriminant.
///
/// Classes are indexed `0..order()`. For `D < 0` each class is stored as its
/// unique reduced form; for `D > 0` as the lexicographically least form of its
/// rho-cycle. Every reduced form of discriminant `D` is mapped to its class,
/// so class lookup after reduction is a hash probe.
#[derive(Debug, Clone)]
pub struct FormClassGroup {
    disc: FundamentalDiscriminant,
    classes: Vec<QuadraticForm>,
    lookup: HashMap<QuadraticForm, usize>,
    principal: usize,
}

/// Builds the narrow class group of `D` with the default bound on `|D|`.
pub fn narrow_class_group(d: &FundamentalDiscriminant) -> Result<FormClassGroup> {
    FormClassGroup::with_bound(d, DEFAULT_BOUND)
}

impl FormClassGroup {
    pub fn with_bound(d: &FundamentalDiscriminant, bound: u64) -> Result<Self> {
        let abs = d.value().unsigned_abs();
        if abs > bound {
            return Err(Error::BoundExceeded { value: abs, bound });
        }
        let (classes, lookup) = if d.value() < 0 {
            enumerate_definite(d)
        } else {
            enumerate_indefinite(d)?
        };
        let principal_form = reduce(QuadraticForm::principal(d), d)?;
        let principal = *lookup
            .get(&principal_form)
            .ok_or_else(|| Error::Internal("principal form missing from class list".into()))?;
        Ok(Self {
            disc: d.clone(),
            classes,
            lookup,
            principal,
        })
    }

    pub fn discriminant(&self) -> &FundamentalDiscriminant {
        &self.disc
    }

    /// The narrow class number `h+(D)`.
    pub fn order(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[QuadraticForm] {
        &self.classes
    }

    pub fn principal_index(&self) -> usize {
        self.principal
    }

    /// Number of reduced forms (for `D > 0`, summed over all cycles).
    pub fn reduced_form_count(&self) -> usize {
        self.lookup.len()
    }

    /// Class index of an arbitrary primitive form of discriminant `D`.
    pub fn class_of(&self, f: &QuadraticForm) -> Result<usize> {
        let r = reduce(*f, &self.disc)?;
        self.lookup
            .get(&r)
            .copied()
            .ok_or_else(|| Error::Internal(format!("reduced form {r} not in class list")))
    }

    fn index_of_reduced(&self, f: &QuadraticForm) -> usize {
        match self.lookup.get(f) {
            Some(&i) => i,
            None => panic!("reduced form {f} of discriminant {} has no class", self.disc),
        }
    }

    /// Class of the Gauss composite.
    pub fn compose(&self, x: usize, y: usize) -> usize {
        let disc = self.disc.value() as i128;
        let f = compose_reduced(self.classes[x], self.classes[y], disc)
            .unwrap_or_else(|e| panic!("composing classes {x} and {y}: {e}"));
        self.index_of_reduced(&f)
    }

    /// Action of the nontrivial automorphism: the class of the opposite form.
    pub fn galois_apply(&self, x: usize) -> usize {
        let disc = self.disc.value() as i128;
        let f = reduce_unchecked(Wide::from(self.classes[x].opposite()), disc)
            .unwrap_or_else(|e| panic!("conjugating class {x}: {e}"));
        self.index_of_reduced(&f)
    }

    pub fn pow(&self, x: usize, mut n: u64) -> usize {
        let mut acc = self.principal;
        let mut base = x;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.compose(acc, base);
            }
            n >>= 1;
            if n > 0 {
                base = self.compose(base, base);
            }
        }
        acc
    }

    /// The class `delta` of forms with leading coefficient -1 (`D > 0` only).
    ///
    /// It is trivial exactly when a unit of norm -1 exists; quotienting by
    /// it turns the narrow group into the ordinary class group.
    pub fn negative_norm_class(&self) -> Option<usize> {
        if self.disc.value() < 0 {
            return None;
        }
        let f = QuadraticForm::negative_principal(&self.disc);
        Some(
            self.class_of(&f)
                .unwrap_or_else(|e| panic!("negative-norm form {f}: {e}")),
        )
    }

    /// View of this group as `Cl(K, c)` for the given cycle.
    pub fn for_cycle(&self, cycle: CycleChoice) -> CycleClassGroup<'_> {
        CycleClassGroup::new(self, cycle)
    }
}

fn enumerate_definite(
    d: &FundamentalDiscriminant,
) -> (Vec<QuadraticForm>, HashMap<QuadraticForm, usize>) {
    let disc = d.value();
    let mut classes = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in (-a + 1)..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            classes.push(QuadraticForm::new(a, b, c));
        }
        a += 1;
    }
    let lookup = classes.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    (classes, lookup)
}

/// Every reduced indefinite form of discriminant `D`.
pub(crate) fn reduced_indefinite_forms(d: &FundamentalDiscriminant) -> Vec<QuadraticForm> {
    let disc = d.value();
    let s = isqrt_u64(disc as u64) as i64;
    let mut forms = Vec::new();
    let mut b = if (s - disc).rem_euclid(2) == 0 { s } else { s - 1 };
    while b > 0 {
        let n = (disc - b * b) / 4;
        for a in ((s - b) / 2 + 1)..=((s + b) / 2) {
            if n % a == 0 {
                let c = n / a;
                forms.push(QuadraticForm::new(a, b, -c));
                forms.push(QuadraticForm::new(-a, b, c));
            }
        }
        b -= 2;
    }
    forms
}

fn enumerate_indefinite(
    d: &FundamentalDiscriminant,
) -> Result<(Vec<QuadraticForm>, HashMap<QuadraticForm, usize>)> {
    let forms = reduced_indefinite_forms(d);
    let mut cycle_of: HashMap<QuadraticForm, usize> = HashMap::with_capacity(forms.len());
    let mut canon: Vec<QuadraticForm> = Vec::new();
    for &start in &forms {
        if cycle_of.contains_key(&start) {
            continue;
        }
        let id = canon.len();
        let mut least = start;
        let mut f = start;
        loop {
            cycle_of.insert(f, id);
            least = least.min(f);
            f = rho(f)?;
            if f == start {
                break;
            }
            if cycle_of.contains_key(&f) {
                return Err(Error::Internal(format!(
                    "rho orbit of {start} entered another cycle at {f}"
                )));
            }
        }
        canon.push(least);
    }
    // order classes by canonical representative
    let mut order: Vec<usize> = (0..canon.len()).collect();
    order.sort_by_key(|&i| canon[i]);
    let mut rank = vec![0; canon.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let classes = order.iter().map(|&i| canon[i]).collect();
    let lookup = cycle_of.into_iter().map(|(f, i)| (f, rank[i])).collect();
    Ok((classes, lookup))
}

/// `Cl(K, c)` for a chosen cycle, realized on top of the narrow group.
///
/// For `D > 0` with the ordinary cycle this is the quotient of the narrow
/// group by the negative-norm class; otherwise it is the narrow group itself.
/// Elements are indexed `0..order()`.
#[derive(Debug, Clone)]
pub struct CycleClassGroup<'a> {
    narrow: &'a FormClassGroup,
    cycle: CycleChoice,
    reps: Vec<usize>,
    coset: Vec<usize>,
    inverses: OnceCell<Vec<usize>>,
    fixed: OnceCell<Vec<usize>>,
    image: OnceCell<Vec<usize>>,
}

impl<'a> CycleClassGroup<'a> {
    pub fn new(narrow: &'a FormClassGroup, cycle: CycleChoice) -> Self {
        let n = narrow.order();
        let delta = match cycle.effective() {
            Cycle::Ordinary => narrow
                .negative_norm_class()
                .filter(|&delta| delta != narrow.principal_index()),
            Cycle::Narrow => None,
        };
        let (reps, coset) = match delta {
            None => ((0..n).collect(), (0..n).collect()),
            Some(delta) => {
                let mut coset = vec![usize::MAX; n];
                let mut reps = Vec::with_capacity(n / 2);
                for i in 0..n {
                    if coset[i] != usize::MAX {
                        continue;
                    }
                    let j = narrow.compose(i, delta);
                    coset[i] = reps.len();
                    coset[j] = reps.len();
                    reps.push(i);
                }
                (reps, coset)
            }
        };
        Self {
            narrow,
            cycle,
            reps,
            coset,
            inverses: OnceCell::new(),
            fixed: OnceCell::new(),
            image: OnceCell::new(),
        }
    }

    pub fn narrow(&self) -> &'a FormClassGroup {
        self.narrow
    }

    pub fn cycle(&self) -> CycleChoice {
        self.cycle
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn identity(&self) -> usize {
        self.coset[self.narrow.principal_index()]
    }

    /// A form representing element `x`.
    pub fn representative(&self, x: usize) -> QuadraticForm {
        self.narrow.classes()[self.reps[x]]
    }

    pub fn compose(&self, x: usize, y: usize) -> usize {
        self.coset[self.narrow.compose(self.reps[x], self.reps[y])]
    }

    pub fn galois_apply(&self, x: usize) -> usize {
        self.coset[self.narrow.galois_apply(self.reps[x])]
    }

    pub fn pow(&self, x: usize, n: u64) -> usize {
        self.coset[self.narrow.pow(self.reps[x], n)]
    }

    /// Group inverse, found by walking cyclic subgroups (`x^i` and `x^(k-i)`
    /// are inverse when `x^k = 1`). Independent of the Galois action.
    pub fn inverse(&self, x: usize) -> usize {
        self.inverses.get_or_init(|| self.inverse_table())[x]
    }

    fn inverse_table(&self) -> Vec<usize> {
        let n = self.order();
        let id = self.identity();
        let mut inv = vec![usize::MAX; n];
        inv[id] = id;
        for x in 0..n {
            if inv[x] != usize::MAX {
                continue;
            }
            let mut powers = vec![id, x];
            let mut p = x;
            loop {
                p = self.compose(p, x);
                if p == id {
                    break;
                }
                powers.push(p);
            }
            let k = powers.len();
            for i in 1..k {
                inv[powers[i]] = powers[k - i];
            }
        }
        inv
    }

    /// Elements fixed by the Galois action, increasing.
    pub fn ambiguous_classes(&self) -> &[usize] {
        self.fixed.get_or_init(|| {
            (0..self.order())
                .filter(|&x| self.galois_apply(x) == x)
                .collect()
        })
    }

    pub fn ambiguous_count(&self) -> usize {
        self.ambiguous_classes().len()
    }

    /// The subgroup `{ x * sigma(x)^-1 }`, increasing.
    pub fn one_minus_sigma_image(&self) -> &[usize] {
        self.image.get_or_init(|| {
            let image: HashSet<usize> = (0..self.order())
                .map(|x| self.compose(x, self.inverse(self.galois_apply(x))))
                .collect();
            let mut image: Vec<usize> = image.into_iter().collect();
            image.sort_unstable();
            image
        })
    }

    pub fn one_minus_sigma_image_order(&self) -> usize {
        self.one_minus_sigma_image().len()
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut n = self.order() as u64;
        let fact = factorize(n as i64).expect("group order is positive");
        for &(p, _) in fact.factors() {
            while n % p == 0 && self.pow(x, n / p) == self.identity() {
                n /= p;
            }
        }
        n
    }

    /// Invariant factors `d1 | d2 | ... | dk` with product equal to the order;
    /// empty for the trivial group.
    pub fn group_structure(&self) -> Vec<u64> {
        let orders: Vec<u64> = (0..self.order()).map(|x| self.element_order(x)).collect();
        invariant_factors(self.order() as u64, &orders)
    }
}

/// Invariant factors of a finite abelian group from its element orders.
pub fn invariant_factors(order: u64, element_orders: &[u64]) -> Vec<u64> {
    if order == 1 {
        return Vec::new();
    }
    let fact = factorize(order as i64).expect("group order is positive");
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for &(p, k) in fact.factors() {
        let p_part = p.pow(k);
        let complement = order / p_part;
        // r[j] = #{y in Sylow_p : y^(p^j) = 1}
        let mut r = Vec::with_capacity(k as usize + 1);
        for j in 0..=k {
            let count = element_orders
                .iter()
                .filter(|&&o| p_valuation(o, p) <= j)
                .count() as u64;
            r.push(count / complement);
        }
        // number of cyclic factors of order >= p^j is log_p(r[j] / r[j-1])
        let mut at_least = Vec::with_capacity(k as usize);
        for j in 1..=k as usize {
            let mut ratio = r[j] / r[j - 1];
            let mut c = 0u32;
            while ratio > 1 {
                ratio /= p;
                c += 1;
            }
            at_least.push(c);
        }
        let count = at_least.first().copied().unwrap_or(0);
        let exps: Vec<u32> = (0..count)
            .map(|i| at_least.iter().filter(|&&c| c > i).count() as u32)
            .collect();
        per_prime.push((p, exps));
    }
    let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut divisors: Vec<u64> = (0..len)
        .map(|i| {
            per_prime
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&x| p.pow(x)))
                .product()
        })
        .collect();
    divisors.sort_unstable();
    divisors
}

fn p_valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `#Cl(K, c)^G` computed by direct enumeration of fixed classes.
pub fn ambiguous_count(d: &FundamentalDiscriminant, cycle: Cycle) -> Result<usize> {
    let g = narrow_class_group(d)?;
    Ok(g.for_cycle(CycleChoice::new(cycle, d)).ambiguous_count())
}

/// `#Cl(K, c)^(1 - sigma)`.
pub fn one_minus_sigma_image_order(d: &FundamentalDiscriminant, cycle: Cycle) -> Result<usize> {
    let g = narrow_class_group(d)?;
    Ok(g.for_cycle(CycleChoice::new(cycle, d)).one_minus_sigma_image_order())
}

/// Invariant factors of the narrow class group.
pub fn group_structure(g: &FormClassGroup) -> Vec<u64> {
    g.for_cycle(CycleChoice::new(Cycle::Narrow, g.discriminant()))
        .group_structure()
}
