//! Finite groups as multiplication tables, homomorphisms, sections and
//! quotients. Elements are dense ids `0..order`; all structure is exact and
//! immutable after construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub type ElemId = usize;

/// Associativity is verified exhaustively up to this order, by seeded
/// sampling of triples above it.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;
pub const ASSOC_SAMPLES: usize = 10_000;
const ASSOC_SEED: u64 = 0x5eed;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<ElemId>, // row-major order×order
    identity: ElemId,
    inv: Vec<ElemId>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}

impl FiniteGroup {
    /// Build a group from a row-major multiplication table, deriving the
    /// identity and inverses and validating the axioms.
    pub fn from_table(table: Vec<ElemId>, labels: Option<Vec<String>>) -> Result<Self> {
        let order = (table.len() as f64).sqrt().round() as usize;
        if order == 0 || order * order != table.len() {
            return Err(Error::InvalidGroup(format!(
                "table length {} is not a positive square",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidGroup(format!(
                "table entry {bad} out of range 0..{order}"
            )));
        }
        let at = |a: ElemId, b: ElemId| table[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;

        let mut inv = vec![0; order];
        for x in 0..order {
            inv[x] = (0..order)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
        }

        if order <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if at(at(a, b), c) != at(a, at(b, c)) {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOC_SEED);
            for _ in 0..ASSOC_SAMPLES {
                let (a, b, c) = (
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                );
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(Error::InvalidGroup(format!(
                        "associativity fails at sampled triple ({a},{b},{c})"
                    )));
                }
            }
        }

        let labels = match labels {
            Some(l) => {
                if l.len() != order {
                    return Err(Error::InvalidGroup(format!(
                        "{} labels for {} elements",
                        l.len(),
                        order
                    )));
                }
                l
            }
            None => (0..order).map(|i| i.to_string()).collect(),
        };

        Ok(FiniteGroup {
            order,
            mul: table,
            identity,
            inv,
            labels,
        })
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            order: 1,
            mul: vec![0],
            identity: 0,
            inv: vec![0],
            labels: vec!["e".into()],
        }
    }

    /// Cyclic group ℤ/n, additive labels `0..n-1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push((a + b) % n);
            }
        }
        FiniteGroup::from_table(table, Some((0..n).map(|i| i.to_string()).collect()))
    }

    /// Symmetric group S_n on {1,..,n}, composition `(fg)(x) = f(g(x))`,
    /// elements in lexicographic order of one-line notation, cycle-notation
    /// labels.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::InvalidGroup(format!(
                "symmetric group argument {n} outside 1..=5"
            )));
        }
        let perms = all_permutations(n);
        let index: BTreeMap<Vec<usize>, usize> =
            perms.iter().cloned().zip(0..).collect();
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        for f in &perms {
            for g in &perms {
                let fg: Vec<usize> = (0..n).map(|x| f[g[x]]).collect();
                table.push(index[&fg]);
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::from_table(table, Some(labels))
    }

    /// Dihedral group of the given (even) order, elements `r^a s^b` with
    /// id `a*2 + b`.
    pub fn dihedral(order: usize) -> Result<Self> {
        if order < 2 || order % 2 != 0 {
            return Err(Error::InvalidGroup(format!(
                "dihedral order {order} must be even and ≥ 2"
            )));
        }
        let n = order / 2;
        let id = |a: usize, b: usize| a * 2 + b;
        let mut table = vec![0; order * order];
        for a in 0..n {
            for b in 0..2 {
                for c in 0..n {
                    for d in 0..2 {
                        // (r^a s^b)(r^c s^d): s r^c = r^{-c} s
                        let (e, f) = if b == 0 {
                            ((a + c) % n, d)
                        } else {
                            ((a + n - c % n) % n, (1 + d) % 2)
                        };
                        table[id(a, b) * order + id(c, d)] = id(e, f);
                    }
                }
            }
        }
        let mut labels = Vec::with_capacity(order);
        for a in 0..n {
            for b in 0..2 {
                let mut s = String::new();
                match a {
                    0 => {}
                    1 => s.push('r'),
                    _ => s.push_str(&format!("r^{a}")),
                }
                if b == 1 {
                    s.push('s');
                }
                if s.is_empty() {
                    s.push('e');
                }
                labels.push(s);
            }
        }
        FiniteGroup::from_table(table, Some(labels))
    }

    /// Direct product with pair ids `a*|B| + b` and labels `(a,b)`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let order = a.order * b.order;
        let id = |x: ElemId, y: ElemId| x * b.order + y;
        let mut table = vec![0; order * order];
        let mut labels = Vec::with_capacity(order);
        for x in 0..a.order {
            for y in 0..b.order {
                labels.push(format!("({},{})", a.labels[x], b.labels[y]));
                for u in 0..a.order {
                    for v in 0..b.order {
                        table[id(x, y) * order + id(u, v)] = id(a.mul(x, u), b.mul(y, v));
                    }
                }
            }
        }
        FiniteGroup::from_table(table, Some(labels)).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inv[a]
    }

    pub fn identity(&self) -> ElemId {
        self.identity
    }

    pub fn label(&self, a: ElemId) -> &str {
        &self.labels[a]
    }

    pub fn elements(&self) -> std::ops::Range<ElemId> {
        0..self.order
    }

    /// Left-fold product of a slice, identity for the empty slice.
    pub fn product(&self, xs: &[ElemId]) -> ElemId {
        xs.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    pub fn conjugate(&self, g: ElemId, x: ElemId) -> ElemId {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: ElemId) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Sorted multiset of element orders; a cheap isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        p.sort_unstable();
        p
    }

    pub fn is_subgroup(&self, elems: &[ElemId]) -> bool {
        let set: BTreeSet<ElemId> = elems.iter().copied().collect();
        set.contains(&self.identity)
            && set
                .iter()
                .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    pub fn is_normal(&self, elems: &[ElemId]) -> bool {
        let set: BTreeSet<ElemId> = elems.iter().copied().collect();
        self.is_subgroup(elems)
            && self
                .elements()
                .all(|g| set.iter().all(|&k| set.contains(&self.conjugate(g, k))))
    }

    pub fn subgroup_generated(&self, gens: &[ElemId]) -> Vec<ElemId> {
        let mut set: BTreeSet<ElemId> = [self.identity].into();
        let mut frontier: Vec<ElemId> = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if set.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        set.into_iter().collect()
    }

    /// Commutator subgroup, by closing the set of commutators.
    pub fn commutator_subgroup(&self) -> Vec<ElemId> {
        let mut comms = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                comms.push(self.mul(
                    self.mul(a, b),
                    self.mul(self.inv(a), self.inv(b)),
                ));
            }
        }
        self.subgroup_generated(&comms)
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    permute(&mut cur, 0, &mut out);
    out.sort();
    out
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut s = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        s.push('(');
        let mut x = start;
        loop {
            seen[x] = true;
            s.push_str(&(x + 1).to_string());
            x = p[x];
            if x == start {
                break;
            }
        }
        s.push(')');
    }
    if s.is_empty() {
        s.push('e');
    }
    s
}

#[derive(Clone)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    image: Vec<ElemId>,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, image: Vec<ElemId>) -> Result<Self> {
        if image.len() != source.order() {
            return Err(Error::NotAHomomorphism(format!(
                "image table has {} entries for order {}",
                image.len(),
                source.order()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&x| x >= target.order()) {
            return Err(Error::NotAHomomorphism(format!("image id {bad} out of range")));
        }
        if image[source.identity()] != target.identity() {
            return Err(Error::NotAHomomorphism("identity not preserved".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if image[source.mul(a, b)] != target.mul(image[a], image[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "f({a}·{b}) ≠ f({a})·f({b})"
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, image })
    }

    pub fn identity_on(g: &Arc<FiniteGroup>) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            image: g.elements().collect(),
        }
    }

    pub fn apply(&self, x: ElemId) -> ElemId {
        self.image[x]
    }

    pub fn is_injective(&self) -> bool {
        let set: BTreeSet<ElemId> = self.image.iter().copied().collect();
        set.len() == self.source.order()
    }

    pub fn is_surjective(&self) -> bool {
        let set: BTreeSet<ElemId> = self.image.iter().copied().collect();
        set.len() == self.target.order()
    }

    pub fn kernel(&self) -> Vec<ElemId> {
        let e = self.target.identity();
        self.source.elements().filter(|&x| self.image[x] == e).collect()
    }

    pub fn image_set(&self) -> BTreeSet<ElemId> {
        self.image.iter().copied().collect()
    }
}

/// Deterministic set-theoretic section of a surjection: minimal id per
/// fibre, then normalized to `σ(l) = ρ(l)·ρ(1)⁻¹` so that `σ(1) = 1`.
pub fn coset_section(pi: &GroupHom) -> Result<Vec<ElemId>> {
    if !pi.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let l = &pi.target;
    let g = &pi.source;
    let rho: Vec<ElemId> = l
        .elements()
        .map(|t| g.elements().find(|&x| pi.apply(x) == t).expect("surjective"))
        .collect();
    let norm = g.inv(rho[l.identity()]);
    Ok(rho.iter().map(|&r| g.mul(r, norm)).collect())
}

/// A semidirect product `K ⋉ L` together with its inclusion, projection and
/// multiplicative section. Pair `(k,l)` has id `k·|L| + l`; the product is
/// `(k,l)·(k',l') = (k·(l∗k'), l·l')`.
pub struct SemidirectProduct {
    pub group: Arc<FiniteGroup>,
    pub left: Arc<FiniteGroup>,
    pub right: Arc<FiniteGroup>,
    pub iota: GroupHom,
    pub pi: GroupHom,
    /// σ(l) = (1, l), multiplicative by construction.
    pub sigma: Vec<ElemId>,
}

/// `action[l]` is the automorphism `k ↦ l∗k` of `K`; validated to be a
/// homomorphism `L → Aut(K)`.
pub fn semidirect(
    k: &Arc<FiniteGroup>,
    l: &Arc<FiniteGroup>,
    action: &[Vec<ElemId>],
) -> Result<SemidirectProduct> {
    if action.len() != l.order() {
        return Err(Error::NotAHomomorphism(format!(
            "action table has {} rows for |L| = {}",
            action.len(),
            l.order()
        )));
    }
    for (t, row) in action.iter().enumerate() {
        let hom = GroupHom::new(k.clone(), k.clone(), row.clone())
            .map_err(|e| Error::NotAHomomorphism(format!("action of {t} is not an endomorphism: {e}")))?;
        if !hom.is_injective() {
            return Err(Error::NotAHomomorphism(format!("action of {t} is not bijective")));
        }
    }
    if action[l.identity()] != k.elements().collect::<Vec<_>>() {
        return Err(Error::NotAHomomorphism("identity of L does not act trivially".into()));
    }
    for a in l.elements() {
        for b in l.elements() {
            for x in k.elements() {
                if action[l.mul(a, b)][x] != action[a][action[b][x]] {
                    return Err(Error::NotAHomomorphism(format!(
                        "action is not a homomorphism at ({a},{b})"
                    )));
                }
            }
        }
    }

    let order = k.order() * l.order();
    let id = |x: ElemId, t: ElemId| x * l.order() + t;
    let mut table = vec![0; order * order];
    let mut labels = Vec::with_capacity(order);
    for x in k.elements() {
        for t in l.elements() {
            labels.push(format!("({},{})", k.label(x), l.label(t)));
            for y in k.elements() {
                for u in l.elements() {
                    table[id(x, t) * order + id(y, u)] =
                        id(k.mul(x, action[t][y]), l.mul(t, u));
                }
            }
        }
    }
    let group = Arc::new(FiniteGroup::from_table(table, Some(labels))?);
    let iota = GroupHom::new(
        k.clone(),
        group.clone(),
        k.elements().map(|x| id(x, l.identity())).collect(),
    )?;
    let pi = GroupHom::new(
        group.clone(),
        l.clone(),
        (0..order).map(|g| g % l.order()).collect(),
    )?;
    let sigma: Vec<ElemId> = l.elements().map(|t| id(k.identity(), t)).collect();
    Ok(SemidirectProduct {
        group,
        left: k.clone(),
        right: l.clone(),
        iota,
        pi,
        sigma,
    })
}

/// The quotient of `g` by a normal subgroup, with cosets labelled by their
/// minimal-id representative.
pub struct QuotientData {
    pub quotient: Arc<FiniteGroup>,
    pub projection: GroupHom,
}

pub fn quotient_by_normal(g: &Arc<FiniteGroup>, k_elems: &[ElemId]) -> Result<QuotientData> {
    if !g.is_normal(k_elems) {
        return Err(Error::InvalidGroup(
            "given elements do not form a normal subgroup".into(),
        ));
    }
    let kset: BTreeSet<ElemId> = k_elems.iter().copied().collect();
    // coset representative: minimal id in gK
    let rep = |x: ElemId| -> ElemId {
        kset.iter().map(|&k| g.mul(x, k)).min().expect("nonempty")
    };
    let mut reps: Vec<ElemId> = g.elements().map(rep).collect::<BTreeSet<_>>().into_iter().collect();
    reps.sort_unstable();
    let coset_of: Vec<usize> = g
        .elements()
        .map(|x| reps.binary_search(&rep(x)).expect("rep"))
        .collect();
    let order = reps.len();
    let mut table = vec![0; order * order];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * order + j] = coset_of[g.mul(a, b)];
        }
    }
    let labels = reps.iter().map(|&r| format!("{}K", g.label(r))).collect();
    let quotient = Arc::new(FiniteGroup::from_table(table, Some(labels))?);
    let projection = GroupHom::new(g.clone(), quotient.clone(), coset_of)?;
    Ok(QuotientData { quotient, projection })
}

/// A subgroup as a group in its own right, with the inclusion homomorphism.
pub fn subgroup_as_group(g: &Arc<FiniteGroup>, elems: &[ElemId]) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if !g.is_subgroup(elems) {
        return Err(Error::InvalidGroup("given elements do not form a subgroup".into()));
    }
    let mut ids: Vec<ElemId> = elems.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let index: BTreeMap<ElemId, usize> = ids.iter().copied().zip(0..).collect();
    let order = ids.len();
    let mut table = vec![0; order * order];
    for (i, &a) in ids.iter().enumerate() {
        for (j, &b) in ids.iter().enumerate() {
            table[i * order + j] = index[&g.mul(a, b)];
        }
    }
    let labels = ids.iter().map(|&x| g.label(x).to_string()).collect();
    let sub = Arc::new(FiniteGroup::from_table(table, Some(labels))?);
    let incl = GroupHom::new(sub.clone(), g.clone(), ids)?;
    Ok((sub, incl))
}
