//! Root systems generated from a Cartan matrix: positive roots, the
//! invariant form, ρ, the Weyl group and the Kostant partition function.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::arith::{qi, Matrix, Q};
use crate::error::{Error, Result};

/// Default cap on the number of Weyl group elements enumerated.
pub const DEFAULT_WEYL_CAP: usize = 10_080;

/// A weight in simple-root coordinates (coefficients of α_1,…,α_r).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Q>);

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Q::zero(); rank])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Weight(c.iter().map(|&x| qi(x)).collect())
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.0[i] = Q::one();
        w
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &Q) -> Weight {
        Weight(self.0.iter().map(|c| c * s).collect())
    }

    /// Integer coordinates if all coordinates are integers.
    pub fn as_lattice(&self) -> Option<Vec<i64>> {
        self.0.iter().map(crate::arith::q_as_int).collect()
    }

    pub fn height(&self) -> Q {
        self.0.iter().fold(Q::zero(), |a, c| a + c)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Weight> for &Q {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        rhs.scale(self)
    }
}

/// Elements of the root lattice with integer simple-root coordinates.
pub type Lattice = Vec<i64>;

pub fn lattice_to_weight(b: &[i64]) -> Weight {
    Weight::from_ints(b)
}

pub fn lattice_add(a: &[i64], b: &[i64]) -> Lattice {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn lattice_sub(a: &[i64], b: &[i64]) -> Lattice {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn lattice_scale(a: &[i64], s: i64) -> Lattice {
    a.iter().map(|x| x * s).collect()
}

pub fn lattice_height(a: &[i64]) -> i64 {
    a.iter().sum()
}

pub fn lattice_nonneg(a: &[i64]) -> bool {
    a.iter().all(|&x| x >= 0)
}

/// Generalized Cartan matrix a_ij = ⟨α_i^∨, α_j⟩ with its symmetrizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
    sym: Vec<i64>,
}

impl CartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let r = entries.len();
        if r == 0 {
            return Err(Error::InvalidInput("empty Cartan matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidInput("Cartan matrix is not square".into()));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(Error::InvalidInput(format!("diagonal entry a_{i}{i} = {a}, expected 2")));
                }
                if i != j && a > 0 {
                    return Err(Error::InvalidInput(format!("off-diagonal entry a_{i}{j} = {a} is positive")));
                }
                if i != j && (a == 0) != (entries[j][i] == 0) {
                    return Err(Error::InvalidInput(format!("a_{i}{j} and a_{j}{i} must vanish together")));
                }
            }
        }
        let sym = symmetrizers(&entries)?;
        Ok(CartanMatrix { entries, sym })
    }

    /// Cartan matrix of a finite type given by label, e.g. "A2", "B3", "G2".
    pub fn of_type(label: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown Cartan type {label:?}"));
        let mut chars = label.trim().chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        match (letter, n) {
            ('A', _) => {}
            ('B', n) if n >= 2 => a[n - 1][n - 2] = -2,
            ('C', n) if n >= 2 => a[n - 2][n - 1] = -2,
            ('D', n) if n >= 4 => {
                a[n - 2][n - 1] = 0;
                a[n - 1][n - 2] = 0;
                a[n - 3][n - 1] = -1;
                a[n - 1][n - 3] = -1;
            }
            ('G', 2) => a[1][0] = -3,
            ('F', 4) => a[2][1] = -2,
            ('E', 6..=8) => {
                // Bourbaki labelling: α_2 attached to α_4
                a = vec![vec![0i64; n]; n];
                for i in 0..n {
                    a[i][i] = 2;
                }
                let mut link = |x: usize, y: usize| {
                    a[x][y] = -1;
                    a[y][x] = -1;
                };
                link(0, 2);
                link(1, 3);
                link(2, 3);
                for k in 3..n - 1 {
                    link(k, k + 1);
                }
            }
            _ => return Err(bad()),
        }
        Self::new(a)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Minimal positive integers with d_i a_ij = d_j a_ji.
    pub fn symmetrizers(&self) -> &[i64] {
        &self.sym
    }

    /// B_ij = d_i a_ij.
    pub fn symmetrized(&self) -> Matrix<Q> {
        let r = self.rank();
        Matrix::from_fn(r, r, |i, j| qi(self.sym[i] * self.entries[i][j]))
    }

    pub fn is_finite_type(&self) -> bool {
        let b = self.symmetrized();
        (1..=self.rank()).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            b.principal(&idx).det().is_positive()
        })
    }
}

fn symmetrizers(a: &[Vec<i64>]) -> Result<Vec<i64>> {
    let r = a.len();
    let mut d: Vec<Option<Q>> = vec![None; r];
    for start in 0..r {
        if d[start].is_some() {
            continue;
        }
        let mut comp = vec![start];
        d[start] = Some(Q::one());
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..r {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                let dj = d[i].clone().unwrap() * qi(a[i][j]) / qi(a[j][i]);
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        comp.push(j);
                        queue.push_back(j);
                    }
                    Some(existing) if *existing != dj => {
                        return Err(Error::InvalidInput("Cartan matrix is not symmetrizable".into()));
                    }
                    _ => {}
                }
            }
        }
        // clear denominators, then divide by the gcd, per connected component
        let mut lcm = num_bigint::BigInt::one();
        for &i in &comp {
            lcm = num_integer::Integer::lcm(&lcm, d[i].as_ref().unwrap().denom());
        }
        let ints: Vec<num_bigint::BigInt> =
            comp.iter().map(|&i| (d[i].clone().unwrap() * Q::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        for (&i, x) in comp.iter().zip(&ints) {
            d[i] = Some(Q::from_integer(x / &g));
        }
    }
    d.into_iter()
        .map(|x| {
            let v = x.unwrap();
            crate::arith::q_as_int(&v).ok_or_else(|| Error::InvalidInput("symmetrizer overflow".into()))
        })
        .collect()
}

/// A word in simple reflections; `[i1,…,im]` denotes s_{i1}···s_{im}, which
/// acts on weights by applying s_{im} first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylWord {
    pub letters: Vec<usize>,
    pub reduced: bool,
}

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord { letters: vec![], reduced: true }
    }

    pub fn length(&self) -> usize {
        self.letters.len()
    }

    pub fn sign(&self) -> i64 {
        if self.letters.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Root system with its invariant form and combinatorial data.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan: CartanMatrix,
    form: Matrix<Q>,
    cartan_q: Matrix<Q>,
    cartan_inv: Matrix<Q>,
    positive_roots: Vec<Lattice>,
    /// For non-simple roots, (index of β', i) with root = β' + α_i.
    parents: Vec<Option<(usize, usize)>>,
    rho: Weight,
}

impl RootSystem {
    pub fn new(cartan: CartanMatrix) -> Result<Self> {
        if !cartan.is_finite_type() {
            return Err(Error::InvalidInput(format!(
                "Cartan matrix {:?} is not of finite type (symmetrization not positive definite)",
                cartan.entries()
            )));
        }
        let r = cartan.rank();
        let form = cartan.symmetrized();
        let cartan_q = Matrix::from_fn(r, r, |i, j| qi(cartan.entry(i, j)));
        let cartan_inv = cartan_q.inverse().expect("finite type Cartan matrix is invertible");

        // roots of height h+1 from roots of height h via simple-root strings
        let mut roots: Vec<Lattice> = (0..r)
            .map(|i| {
                let mut v = vec![0; r];
                v[i] = 1;
                v
            })
            .collect();
        let mut parents: Vec<Option<(usize, usize)>> = vec![None; r];
        let mut index: HashMap<Lattice, usize> = roots.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        let mut level: Vec<usize> = (0..r).collect();
        while !level.is_empty() {
            let mut next = Vec::new();
            for &k in &level {
                let beta = roots[k].clone();
                for i in 0..r {
                    // p = how far the i-string extends downwards
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if index.contains_key(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pair: i64 = (0..r).map(|j| beta[j] * cartan.entry(i, j)).sum();
                    let q_len = p - pair;
                    if q_len > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !index.contains_key(&up) {
                            index.insert(up.clone(), roots.len());
                            parents.push(Some((k, i)));
                            next.push(roots.len());
                            roots.push(up);
                        }
                    }
                }
            }
            level = next;
        }

        let mut rho = Weight::zero(r);
        for root in &roots {
            rho = &rho + &Weight::from_ints(root);
        }
        let rho = rho.scale(&Q::new(1.into(), 2.into()));
        Ok(RootSystem { cartan, form, cartan_q, cartan_inv, positive_roots: roots, parents, rho })
    }

    pub fn of_type(label: &str) -> Result<Self> {
        Self::new(CartanMatrix::of_type(label)?)
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    /// B_ij = (α_i, α_j).
    pub fn form_matrix(&self) -> &Matrix<Q> {
        &self.form
    }

    pub fn positive_roots(&self) -> &[Lattice] {
        &self.positive_roots
    }

    /// Index of a positive root in `positive_roots`.
    pub fn root_index(&self, beta: &[i64]) -> Option<usize> {
        self.positive_roots.iter().position(|r| r == beta)
    }

    /// Decomposition root = parent + α_i for non-simple roots.
    pub fn parent(&self, k: usize) -> Option<(usize, usize)> {
        self.parents[k]
    }

    /// All decompositions α = β + α_i with β a positive root.
    pub fn decompositions(&self, k: usize) -> Vec<(usize, usize)> {
        let root = &self.positive_roots[k];
        (0..self.rank())
            .filter_map(|i| {
                let mut b = root.clone();
                b[i] -= 1;
                self.root_index(&b).map(|j| (j, i))
            })
            .collect()
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::simple(self.rank(), i)
    }

    pub fn is_simple(&self, k: usize) -> bool {
        self.parents[k].is_none()
    }

    /// (μ, ν)
    pub fn pairing(&self, mu: &Weight, nu: &Weight) -> Q {
        let r = self.rank();
        let mut acc = Q::zero();
        for i in 0..r {
            if mu.0[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if nu.0[j].is_zero() || self.form[(i, j)].is_zero() {
                    continue;
                }
                acc += &mu.0[i] * &self.form[(i, j)] * &nu.0[j];
            }
        }
        acc
    }

    pub fn pairing_lattice(&self, a: &[i64], b: &[i64]) -> Q {
        self.pairing(&Weight::from_ints(a), &Weight::from_ints(b))
    }

    /// ⟨μ, α^∨⟩ = 2(μ, α)/(α, α)
    pub fn coroot_pairing(&self, mu: &Weight, alpha: &Weight) -> Q {
        qi(2) * self.pairing(mu, alpha) / self.pairing(alpha, alpha)
    }

    /// ⟨μ, α_i^∨⟩
    pub fn simple_coroot(&self, mu: &Weight, i: usize) -> Q {
        (0..self.rank()).fold(Q::zero(), |acc, k| acc + &mu.0[k] * qi(self.cartan.entry(i, k)))
    }

    /// Fundamental-weight coordinates ⟨μ, α_i^∨⟩.
    pub fn to_fundamental(&self, mu: &Weight) -> Vec<Q> {
        (0..self.rank()).map(|i| self.simple_coroot(mu, i)).collect()
    }

    pub fn from_fundamental(&self, f: &[Q]) -> Weight {
        Weight(self.cartan_inv.mul_vec(f))
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let mut f = vec![Q::zero(); self.rank()];
        f[i] = Q::one();
        self.from_fundamental(&f)
    }

    pub fn cartan_q(&self) -> &Matrix<Q> {
        &self.cartan_q
    }

    pub fn is_dominant_integral(&self, mu: &Weight) -> bool {
        self.to_fundamental(mu).iter().all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn is_integral(&self, mu: &Weight) -> bool {
        self.to_fundamental(mu).iter().all(|c| c.is_integer())
    }

    /// s_i(μ) = μ − ⟨μ, α_i^∨⟩ α_i
    pub fn reflect(&self, mu: &Weight, i: usize) -> Weight {
        let mut out = mu.clone();
        out.0[i] -= self.simple_coroot(mu, i);
        out
    }

    pub fn reflect_lattice(&self, b: &[i64], i: usize) -> Lattice {
        let c: i64 = (0..self.rank()).map(|k| b[k] * self.cartan.entry(i, k)).sum();
        let mut out = b.to_vec();
        out[i] -= c;
        out
    }

    pub fn apply_word(&self, w: &WeylWord, mu: &Weight) -> Weight {
        w.letters.iter().rev().fold(mu.clone(), |acc, &i| self.reflect(&acc, i))
    }

    pub fn apply_word_lattice(&self, w: &WeylWord, b: &[i64]) -> Lattice {
        w.letters.iter().rev().fold(b.to_vec(), |acc, &i| self.reflect_lattice(&acc, i))
    }

    pub fn all_roots(&self) -> Vec<Lattice> {
        let mut out: Vec<Lattice> = self.positive_roots.clone();
        out.extend(self.positive_roots.iter().map(|r| lattice_scale(r, -1)));
        out
    }

    /// One shortest word per element, found by breadth-first search on the
    /// orbit of ρ; sorted by length, identity first, w₀ last.
    pub fn weyl_group(&self) -> Result<Vec<WeylWord>> {
        self.weyl_group_capped(DEFAULT_WEYL_CAP)
    }

    pub fn weyl_group_capped(&self, cap: usize) -> Result<Vec<WeylWord>> {
        let r = self.rank();
        let rho2: Lattice = self.rho.scale(&qi(2)).as_lattice().expect("2ρ is integral");
        let mut seen: HashSet<Lattice> = HashSet::from([rho2.clone()]);
        let mut out = vec![WeylWord::identity()];
        let mut queue = VecDeque::from([(rho2, Vec::<usize>::new())]);
        while let Some((img, word)) = queue.pop_front() {
            for i in 0..r {
                let next = self.reflect_lattice(&img, i);
                if seen.insert(next.clone()) {
                    let mut w = vec![i];
                    w.extend(&word);
                    if out.len() >= cap {
                        return Err(Error::Bound(format!("Weyl group exceeds cap of {cap} elements")));
                    }
                    out.push(WeylWord { letters: w.clone(), reduced: true });
                    queue.push_back((next, w));
                }
            }
        }
        Ok(out)
    }

    pub fn longest_element(&self) -> Result<WeylWord> {
        Ok(self.weyl_group()?.pop().expect("nonempty group"))
    }

    /// Number of ways to write β as a nonnegative integer combination of
    /// positive roots.
    pub fn kostant_partition(&self, beta: &Weight) -> Result<u64> {
        let b = beta
            .as_lattice()
            .ok_or_else(|| Error::InvalidInput(format!("{beta:?} is not in the root lattice")))?;
        Ok(self.kostant_lattice(&b))
    }

    pub fn kostant_lattice(&self, b: &[i64]) -> u64 {
        if !lattice_nonneg(b) {
            return 0;
        }
        let mut memo = HashMap::new();
        kostant_rec(&self.positive_roots, self.positive_roots.len(), b.to_vec(), &mut memo)
    }

    /// χ_k^α(μ) = (α, μ + ρ) − (k/2)(α, α)
    pub fn chi(&self, alpha: &[i64], k: i64, mu: &Weight) -> Q {
        let a = Weight::from_ints(alpha);
        self.pairing(&a, &(mu + &self.rho)) - qi(k) * self.pairing(&a, &a) / qi(2)
    }
}

fn kostant_rec(roots: &[Lattice], upto: usize, b: Lattice, memo: &mut HashMap<(usize, Lattice), u64>) -> u64 {
    if b.iter().all(|&x| x == 0) {
        return 1;
    }
    if upto == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&(upto, b.clone())) {
        return v;
    }
    let root = &roots[upto - 1];
    let mut total = 0;
    let mut rest = b.clone();
    loop {
        total += kostant_rec(roots, upto - 1, rest.clone(), memo);
        rest = lattice_sub(&rest, root);
        if !lattice_nonneg(&rest) {
            break;
        }
    }
    memo.insert((upto, b), total);
    total
}

/// All lattice vectors 0 ≤ γ ≤ β componentwise.
pub fn lattice_box(beta: &[i64]) -> Vec<Lattice> {
    let mut out = vec![vec![]];
    for &b in beta {
        let mut next = Vec::new();
        for v in &out {
            for c in 0..=b.max(0) {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// All γ ∈ Q₊ with height exactly `h` in rank `r`.
pub fn lattice_of_height(r: usize, h: i64) -> Vec<Lattice> {
    if r == 0 {
        return if h == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=h {
        for mut rest in lattice_of_height(r - 1, h - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b2_symmetrizers_and_roots() {
        let rs = RootSystem::new(CartanMatrix::new(vec![vec![2, -1], vec![-2, 2]]).unwrap()).unwrap();
        assert_eq!(rs.cartan().symmetrizers(), &[2, 1]);
        assert_eq!(rs.positive_roots().len(), 4);
        assert_eq!(rs.weyl_group().unwrap().len(), 8);
    }

    #[test]
    fn rejects_affine() {
        let c = CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert!(RootSystem::new(c).is_err());
    }

    #[test]
    fn root_counts_by_type() {
        for (t, n, w) in [("A3", 6, 24), ("B3", 9, 48), ("C3", 9, 48), ("G2", 6, 12), ("D4", 12, 192)] {
            let rs = RootSystem::of_type(t).unwrap();
            assert_eq!(rs.positive_roots().len(), n, "{t}");
            assert_eq!(rs.weyl_group().unwrap().len(), w, "{t}");
        }
        assert_eq!(RootSystem::of_type("F4").unwrap().positive_roots().len(), 24);
        assert_eq!(RootSystem::of_type("E6").unwrap().positive_roots().len(), 36);
    }

    #[test]
    fn weyl_cap_enforced() {
        let rs = RootSystem::of_type("A3").unwrap();
        assert!(rs.weyl_group_capped(10).is_err());
    }

    #[test]
    fn fundamental_round_trip() {
        let rs = RootSystem::of_type("B2").unwrap();
        let mu = Weight(vec![crate::arith::q(1, 3), crate::arith::q(-5, 2)]);
        assert_eq!(rs.from_fundamental(&rs.to_fundamental(&mu)), mu);
    }
}
