use crate::error::{Error, Result};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

/// Default bound on the order of groups whose subgroups are enumerated.
pub const SUBGROUP_BOUND: usize = 16;

struct GroupInner {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// Finite group given by its multiplication table; `table[a][b] = a·b`.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupInner>);

impl PartialEq for FiniteGroup {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.table == o.0.table && self.0.identity == o.0.identity)
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order())
    }
}

impl FiniteGroup {
    /// Validates the table: associativity first, then identity, then inverses.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if names.len() != n {
            return Err(Error::DimensionMismatch(format!("{} names for a table of size {n}", names.len())));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::DimensionMismatch("table must be square with entries below its size".into()));
            }
        }
        if n == 0 {
            return Err(Error::NoIdentity);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[a][table[b][c]] != table[ab][c] {
                        return Err(Error::NonAssociative(a, b, c));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or(Error::NoInverse(x))?;
            inverse.push(y);
        }
        Ok(FiniteGroup(Arc::new(GroupInner { names, table, identity, inverse })))
    }

    /// Closure of a set of permutations under composition; `(p·q)(i) = p(q(i))`.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Self {
        let deg = gens.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..deg).collect();
        let mut elems = vec![id];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p: Vec<usize> = (0..deg).map(|k| g[elems[i][k]]).collect();
                if !elems.contains(&p) {
                    elems.push(p);
                }
            }
            i += 1;
        }
        elems.sort();
        let idx = |p: &Vec<usize>| elems.iter().position(|e| e == p).expect("closed");
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|p| {
                elems
                    .iter()
                    .map(|q| idx(&(0..deg).map(|k| p[q[k]]).collect()))
                    .collect()
            })
            .collect();
        let names = elems.iter().map(|p| cycle_name(p)).collect();
        Self::from_table(names, table).expect("permutation groups are groups")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(names, table).expect("cyclic table")
    }

    pub fn klein4() -> Self {
        Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]])
    }

    /// Dihedral group of order `2m`.
    pub fn dihedral(m: usize) -> Self {
        let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let refl: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
        Self::from_permutations(&[rot, refl])
    }

    pub fn quaternion() -> Self {
        // units ±1, ±i, ±j, ±k acting on themselves by left multiplication
        // encode q = (sign, unit) as index 2*unit + (sign<0)
        let mul_unit = |a: usize, b: usize| -> (bool, usize) {
            // units 0=1,1=i,2=j,3=k; returns (negative, unit)
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 1) => (true, 3),
                (2, 3) => (false, 1),
                (3, 2) => (true, 1),
                (3, 1) => (false, 2),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let names: Vec<String> = (0..8)
            .map(|x| {
                let u = ["1", "i", "j", "k"][x / 2];
                if x % 2 == 1 { format!("-{u}") } else { u.to_string() }
            })
            .collect();
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (neg, u) = mul_unit(a / 2, b / 2);
                        let s = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                        2 * u + s as usize
                    })
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("quaternion table")
    }

    /// Pairs `(a, b)` indexed as `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let names = (0..na * nb).map(|x| format!("({},{})", a.name(x / nb), b.name(x % nb))).collect();
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("product of groups")
    }

    /// Names like `C4`, `V4`, `S3`, `D4`, `Q8`, `C2xC3`.
    pub fn named(name: &str) -> Option<Self> {
        let parts: Vec<&str> = name.split('x').collect();
        if parts.len() > 1 {
            let mut g = Self::named(parts[0])?;
            for p in &parts[1..] {
                g = Self::direct_product(&g, &Self::named(p)?);
            }
            return Some(g);
        }
        match name {
            "V4" => Some(Self::klein4()),
            "S3" => Some(Self::symmetric3()),
            "Q8" => Some(Self::quaternion()),
            "1" | "C1" => Some(Self::trivial()),
            _ => {
                let (kind, num) = name.split_at(1);
                let n: usize = num.parse().ok().filter(|&n| n >= 1)?;
                match kind {
                    "C" => Some(Self::cyclic(n)),
                    "D" if n >= 2 => Some(Self::dihedral(n)),
                    _ => None,
                }
            }
        }
    }

    pub fn order(&self) -> usize {
        self.0.table.len()
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.0.inverse[a]
    }

    /// `g·x·g⁻¹`
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn name(&self, a: usize) -> &str {
        &self.0.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.0.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Non-identity elements in index order.
    pub fn nonidentity(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements().filter(move |&g| g != self.identity())
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup closure of a set of elements, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity()] = true;
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.elements().filter(|&x| seen[x]).collect()
    }

    /// Greedy generating set: scan by index, keep elements outside the
    /// closure of those kept so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = vec![self.identity()];
        for g in self.elements() {
            if !cur.contains(&g) {
                gens.push(g);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_elements(self, self.elements().collect()).expect("whole group")
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_elements(self, vec![self.identity()]).expect("trivial subgroup")
    }

    /// Every subgroup, sorted by order then element list.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        enumerate_subgroups(self)
    }
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        let mut cyc = vec![s];
        seen[s] = true;
        let mut x = p[s];
        while x != s {
            seen[x] = true;
            cyc.push(x);
            x = p[x];
        }
        let inner: Vec<String> = cyc.iter().map(|c| (c + 1).to_string()).collect();
        out.push_str(&format!("({})", inner.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// A subgroup of a finite group, stored as a sorted list of element indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    elems: Vec<usize>,
    mask: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, o: &Self) -> bool {
        self.parent == o.parent && self.elems == o.elems
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{}", self.label())
    }
}

impl Subgroup {
    pub fn from_elements(parent: &FiniteGroup, mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        let mut mask = vec![false; parent.order()];
        for &e in &elems {
            if e >= parent.order() {
                return Err(Error::NotASubgroup(format!("element {e} out of range")));
            }
            mask[e] = true;
        }
        if !mask[parent.identity()] {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in &elems {
            if !mask[parent.inv(a)] {
                return Err(Error::NotASubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &elems {
                if !mask[parent.mul(a, b)] {
                    return Err(Error::NotASubgroup(format!("not closed at ({a}, {b})")));
                }
            }
        }
        Ok(Subgroup { parent: parent.clone(), elems, mask })
    }

    pub fn generated_by(parent: &FiniteGroup, gens: &[usize]) -> Self {
        Self::from_elements(parent, parent.closure(gens)).expect("closure is a subgroup")
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn is_subgroup_of(&self, o: &Subgroup) -> bool {
        self.elems.iter().all(|&e| o.contains(e))
    }

    /// Position of a parent element within the sorted element list.
    pub fn local_index(&self, g: usize) -> Option<usize> {
        self.elems.binary_search(&g).ok()
    }

    pub fn label(&self) -> String {
        let inner: Vec<String> = self.elems.iter().map(|e| e.to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }

    pub fn is_normal(&self) -> bool {
        self.parent.elements().all(|g| self.elems.iter().all(|&h| self.contains(self.parent.conj(g, h))))
    }

    pub fn is_normal_in(&self, o: &Subgroup) -> bool {
        self.is_subgroup_of(o) && o.elems.iter().all(|&g| self.elems.iter().all(|&h| self.contains(self.parent.conj(g, h))))
    }

    /// `g·H·g⁻¹`
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let el = self.elems.iter().map(|&h| self.parent.conj(g, h)).collect();
        Subgroup::from_elements(&self.parent, el).expect("conjugate subgroup")
    }

    /// Left cosets `gH`, each sorted, ordered by least element.
    pub fn left_cosets(&self) -> Vec<Vec<usize>> {
        let g = &self.parent;
        let mut seen = vec![false; g.order()];
        let mut out = Vec::new();
        for x in g.elements() {
            if seen[x] {
                continue;
            }
            let mut c: Vec<usize> = self.elems.iter().map(|&h| g.mul(x, h)).collect();
            c.sort_unstable();
            for &y in &c {
                seen[y] = true;
            }
            out.push(c);
        }
        out
    }

    /// Least element of each left coset, except that the coset `H` itself
    /// is represented by the identity.
    pub fn left_coset_reps(&self) -> Vec<usize> {
        self.left_cosets().iter().map(|c| self.pick(c, c[0])).collect()
    }

    /// Alternative transversal: largest element of each coset.
    pub fn left_coset_reps_max(&self) -> Vec<usize> {
        self.left_cosets().iter().map(|c| self.pick(c, *c.last().expect("nonempty"))).collect()
    }

    fn pick(&self, coset: &[usize], default: usize) -> usize {
        if coset.contains(&self.parent.identity()) {
            self.parent.identity()
        } else {
            default
        }
    }

    /// The subgroup as a group in its own right, elements ordered as in
    /// [`Subgroup::elements`]; the second component maps local to parent indices.
    pub fn as_group(&self) -> (FiniteGroup, Vec<usize>) {
        let names = self.elems.iter().map(|&e| self.parent.name(e).to_string()).collect();
        let table = self
            .elems
            .iter()
            .map(|&a| {
                self.elems
                    .iter()
                    .map(|&b| self.local_index(self.parent.mul(a, b)).expect("closed"))
                    .collect()
            })
            .collect();
        let grp = FiniteGroup::from_table(names, table).expect("subgroup table");
        (grp, self.elems.clone())
    }

    /// Primes `p` for which this is a Sylow `p`-subgroup.
    pub fn sylow_primes(&self) -> Vec<usize> {
        let n = self.parent.order();
        prime_factors(n)
            .into_iter()
            .filter(|&p| {
                let mut pk = 1;
                while n.is_multiple_of(pk * p) {
                    pk *= p;
                }
                self.order() == pk
            })
            .collect()
    }

    /// Subgroups of the parent contained in this one.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        Ok(enumerate_subgroups(&self.parent)?.into_iter().filter(|k| k.is_subgroup_of(self)).collect())
    }
}

pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All subgroups by closing known subgroups under one extra element at a time.
pub fn enumerate_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    if g.order() > SUBGROUP_BOUND {
        return Err(Error::GroupTooLarge { order: g.order(), bound: SUBGROUP_BOUND });
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let start = vec![g.identity()];
    found.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(h) = queue.pop_front() {
        for x in g.elements() {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(x);
            let k = g.closure(&gens);
            if found.insert(k.clone()) {
                queue.push_back(k);
            }
        }
    }
    let mut subs: Vec<Subgroup> = found
        .into_iter()
        .map(|e| Subgroup::from_elements(g, e).expect("closure is a subgroup"))
        .collect();
    subs.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elems.cmp(&b.elems)));
    Ok(subs)
}

/// `G/N` for normal `N`, with projection and a section through least coset
/// elements (the identity coset maps to the identity).
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: FiniteGroup,
    pub normal: Subgroup,
    pub projection: Vec<usize>,
    pub section: Vec<usize>,
}

impl QuotientGroup {
    pub fn new(normal: &Subgroup) -> Result<Self> {
        if !normal.is_normal() {
            return Err(Error::NotNormal);
        }
        let g = normal.parent();
        let cosets = normal.left_cosets();
        let mut projection = vec![0; g.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                projection[x] = i;
            }
        }
        let section = normal.left_coset_reps();
        let names = section.iter().map(|&s| format!("[{}]", g.name(s))).collect();
        let table = section
            .iter()
            .map(|&a| section.iter().map(|&b| projection[g.mul(a, b)]).collect())
            .collect();
        let group = FiniteGroup::from_table(names, table).expect("quotient table");
        Ok(QuotientGroup { group, normal: normal.clone(), projection, section })
    }

    /// Second section policy: largest element of each coset.
    pub fn section_max(&self) -> Vec<usize> {
        self.normal.left_coset_reps_max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_orders() {
        for (n, o) in [("C3", 3), ("V4", 4), ("S3", 6), ("D4", 8), ("Q8", 8), ("C2xC3", 6)] {
            let g = FiniteGroup::named(n).unwrap();
            assert_eq!(g.order(), o, "{n}");
        }
        assert!(!FiniteGroup::symmetric3().is_abelian());
        assert!(!FiniteGroup::quaternion().is_abelian());
    }

    #[test]
    fn non_associative_rejected() {
        // a loop of order 3 with identity 0 that is not associative is
        // impossible, so use a table without associativity on 2 elements
        let t = vec![vec![1, 0], vec![0, 0]];
        let r = FiniteGroup::from_table(vec!["a".into(), "b".into()], t);
        assert!(matches!(r, Err(Error::NonAssociative(..))));
    }

    #[test]
    fn missing_identity_and_inverse() {
        let t = vec![vec![0, 0], vec![0, 0]];
        assert_eq!(FiniteGroup::from_table(vec!["a".into(), "b".into()], t).err(), Some(Error::NoIdentity));
        let t = vec![vec![0, 1], vec![1, 1]];
        assert_eq!(FiniteGroup::from_table(vec!["a".into(), "b".into()], t).err(), Some(Error::NoInverse(1)));
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(FiniteGroup::cyclic(3).subgroups().unwrap().len(), 2);
        let s3 = FiniteGroup::symmetric3().subgroups().unwrap();
        let orders: Vec<usize> = s3.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        let v4 = FiniteGroup::klein4().subgroups().unwrap();
        assert_eq!(v4.len(), 5);
        assert_eq!(v4[4].sylow_primes(), vec![2]);
        let big = FiniteGroup::cyclic(17);
        assert!(matches!(big.subgroups(), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn cosets_and_quotient() {
        let g = FiniteGroup::cyclic(4);
        let h = Subgroup::generated_by(&g, &[2]);
        assert_eq!(h.left_coset_reps(), vec![0, 1]);
        let q = QuotientGroup::new(&h).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.projection, vec![0, 1, 0, 1]);
        let s3 = FiniteGroup::symmetric3();
        let t = Subgroup::generated_by(&s3, &[1]);
        assert!(!t.is_normal());
        assert_eq!(QuotientGroup::new(&t).err(), Some(Error::NotNormal));
    }
}
