//! Finite groups given by Cayley tables, their subgroups, normal subgroups
//! and coset decompositions.
//!
//! Elements are identified with indices `0..order`. Every builtin family
//! documents its element ordering so that downstream numbers are
//! reproducible.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orders up to this bound get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;
/// Largest group accepted by [`enumerate_normal_subgroups`].
pub const NORMAL_SUBGROUP_LIMIT: usize = 128;

/// How thoroughly [`FiniteGroup::from_table`] checks associativity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AssociativityCheck {
    /// Exhaustive up to order 64, `10 * order^2` sampled triples above.
    #[default]
    Auto,
    /// Always exhaustive.
    Strict,
}

/// A finite group stored as a validated Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// JSON shape of a Cayley table: `{"order": n, "table": [[...]], "labels": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyDocument {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group.
    pub fn from_table(
        name: impl Into<String>,
        rows: &[Vec<usize>],
        labels: Option<Vec<String>>,
        check: AssociativityCheck,
    ) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::MalformedTable("table is empty".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::MalformedTable(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            if let Some((j, &v)) = row.iter().enumerate().find(|(_, &v)| v >= order) {
                return Err(Error::MalformedTable(format!(
                    "entry ({i},{j}) = {v} is out of range 0..{order}"
                )));
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != order {
                return Err(Error::MalformedTable(format!(
                    "{} labels given for {order} elements",
                    labels.len()
                )));
            }
        }
        let table: Vec<usize> = rows.iter().flatten().copied().collect();

        // Latin square.
        for i in 0..order {
            let mut seen = vec![None; order];
            for j in 0..order {
                let v = table[i * order + j];
                if let Some(prev) = seen[v] {
                    return Err(Error::NotAGroup(format!(
                        "row {i} is not a permutation: value {v} at columns {prev} and {j}"
                    )));
                }
                seen[v] = Some(j);
            }
        }
        for j in 0..order {
            let mut seen = vec![None; order];
            for i in 0..order {
                let v = table[i * order + j];
                if let Some(prev) = seen[v] {
                    return Err(Error::NotAGroup(format!(
                        "column {j} is not a permutation: value {v} at rows {prev} and {i}"
                    )));
                }
                seen[v] = Some(i);
            }
        }

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity element".into()))?;

        let mut inverse = vec![0; order];
        for x in 0..order {
            // Latin square guarantees a unique left inverse.
            let y = (0..order)
                .find(|&y| table[y * order + x] == identity)
                .expect("latin square column contains identity");
            if table[x * order + y] != identity {
                return Err(Error::NotAGroup(format!(
                    "element {x} has left inverse {y} but {x}*{y} = {} is not the identity",
                    table[x * order + y]
                )));
            }
            inverse[x] = y;
        }

        let group = FiniteGroup {
            name: name.into(),
            order,
            table,
            identity,
            inverse,
            labels,
        };
        group.check_associativity(check)?;
        Ok(group)
    }

    fn check_associativity(&self, check: AssociativityCheck) -> Result<()> {
        let n = self.order;
        let assoc = |a: usize, b: usize, c: usize| -> Result<()> {
            let left = self.mul(self.mul(a, b), c);
            let right = self.mul(a, self.mul(b, c));
            if left != right {
                return Err(Error::NotAGroup(format!(
                    "associativity fails for ({a},{b},{c}): ({a}*{b})*{c} = {left}, {a}*({b}*{c}) = {right}"
                )));
            }
            Ok(())
        };
        if check == AssociativityCheck::Strict || n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assoc(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..10 * n * n {
                assoc(
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                )?;
            }
        }
        Ok(())
    }

    /// Parses and validates a Cayley-table JSON document.
    pub fn from_json(
        name: impl Into<String>,
        json: &str,
        check: AssociativityCheck,
    ) -> Result<Self> {
        let doc: CayleyDocument =
            serde_json::from_str(json).map_err(|e| Error::MalformedTable(e.to_string()))?;
        Self::from_document(name, doc, check)
    }

    pub fn from_document(
        name: impl Into<String>,
        doc: CayleyDocument,
        check: AssociativityCheck,
    ) -> Result<Self> {
        if doc.order != doc.table.len() {
            return Err(Error::MalformedTable(format!(
                "declared order {} but table has {} rows",
                doc.order,
                doc.table.len()
            )));
        }
        Self::from_table(name, &doc.table, doc.labels, check)
    }

    pub fn to_document(&self) -> CayleyDocument {
        CayleyDocument {
            order: self.order,
            table: self
                .table
                .chunks(self.order)
                .map(<[usize]>::to_vec)
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("cayley document serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(labels) => labels[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn check_index(&self, x: usize) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: x,
                order: self.order,
            })
        }
    }

    /// `x⁻¹·s·x`.
    pub fn conjugate(&self, x: usize, s: usize) -> Result<usize> {
        self.check_index(x)?;
        self.check_index(s)?;
        Ok(self.conj(x, s))
    }

    #[inline]
    pub(crate) fn conj(&self, x: usize, s: usize) -> usize {
        self.mul(self.mul(self.inv(x), s), x)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Conjugacy classes, each sorted, listed by their minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for s in 0..self.order {
            if class_of[s] != usize::MAX {
                continue;
            }
            let members: BTreeSet<usize> = (0..self.order).map(|x| self.conj(x, s)).collect();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members.into_iter().collect());
        }
        classes
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|x| self.mul(z, x) == self.mul(x, z)))
            .collect()
    }

    /// Sorted members of the subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(y) = queue.pop_front() {
            for &g in gens {
                let z = self.mul(y, g);
                if !inside[z] {
                    inside[z] = true;
                    queue.push_back(z);
                }
            }
        }
        (0..self.order).filter(|&x| inside[x]).collect()
    }

    /// Whether `perm` is a bijective, product-preserving map of the elements.
    /// Returns the first violating pair otherwise.
    pub fn check_automorphism(&self, perm: &[usize]) -> Result<()> {
        if perm.len() != self.order {
            return Err(Error::NotAnAutomorphism(format!(
                "map has {} entries, group has order {}",
                perm.len(),
                self.order
            )));
        }
        let mut hit = vec![false; self.order];
        for (x, &y) in perm.iter().enumerate() {
            if y >= self.order || hit[y] {
                return Err(Error::NotAnAutomorphism(format!(
                    "not bijective at element {x}"
                )));
            }
            hit[y] = true;
        }
        for a in 0..self.order {
            for b in 0..self.order {
                if perm[self.mul(a, b)] != self.mul(perm[a], perm[b]) {
                    return Err(Error::NotAnAutomorphism(format!(
                        "product not preserved for pair ({a},{b})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Direct product `self × other`, element `(i, j)` at index `i * |other| + j`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let rows: Vec<Vec<usize>> = (0..n * m)
            .map(|a| {
                (0..n * m)
                    .map(|b| self.mul(a / m, b / m) * m + other.mul(a % m, b % m))
                    .collect()
            })
            .collect();
        let labels = (0..n * m)
            .map(|a| format!("({},{})", self.label(a / m), other.label(a % m)))
            .collect();
        FiniteGroup::from_table(
            format!("{}x{}", self.name, other.name),
            &rows,
            Some(labels),
            AssociativityCheck::Auto,
        )
        .expect("direct product of groups is a group")
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

/// A subgroup of a finite group, stored as the sorted list of its members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<usize>,
    position: Vec<Option<usize>>,
    is_normal: bool,
}

impl Subgroup {
    /// Validates closure under product and inverse and decides normality.
    pub fn new(g: &FiniteGroup, members: &[usize]) -> Result<Self> {
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &x in &sorted {
            g.check_index(x)?;
        }
        let mut position = vec![None; g.order()];
        for (i, &x) in sorted.iter().enumerate() {
            position[x] = Some(i);
        }
        if position[g.identity()].is_none() {
            return Err(Error::InvalidArgument(
                "subgroup must contain the identity".into(),
            ));
        }
        for &a in &sorted {
            if position[g.inv(a)].is_none() {
                return Err(Error::InvalidArgument(format!(
                    "not closed under inverse: {a}⁻¹ missing"
                )));
            }
            for &b in &sorted {
                if position[g.mul(a, b)].is_none() {
                    return Err(Error::InvalidArgument(format!(
                        "not closed under product: {a}*{b} = {} missing",
                        g.mul(a, b)
                    )));
                }
            }
        }
        let is_normal = normality_witness(g, &sorted, &position).is_none();
        Ok(Subgroup {
            parent_order: g.order(),
            members: sorted,
            position,
            is_normal,
        })
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Self::new(g, &[g.identity()]).expect("trivial subgroup")
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Self::new(g, &(0..g.order()).collect::<Vec<_>>()).expect("whole group")
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.position.get(x).is_some_and(Option::is_some)
    }

    /// Position of `x` inside [`Self::members`].
    #[inline]
    pub fn position(&self, x: usize) -> Option<usize> {
        self.position.get(x).copied().flatten()
    }

    /// Fails with `NotNormal` naming a witness unless the subgroup is normal in `g`.
    pub fn require_normal(&self, g: &FiniteGroup) -> Result<()> {
        self.require_parent(g)?;
        match normality_witness(g, &self.members, &self.position) {
            None => Ok(()),
            Some((s, x)) => Err(Error::NotNormal { element: s, by: x }),
        }
    }

    pub fn require_parent(&self, g: &FiniteGroup) -> Result<()> {
        if self.parent_order != g.order() {
            return Err(Error::DomainMismatch(format!(
                "subgroup belongs to a group of order {}, not {}",
                self.parent_order,
                g.order()
            )));
        }
        Ok(())
    }

    /// The subgroup as a group in its own right, with element `i` standing
    /// for `members()[i]`.
    pub fn as_group(&self, g: &FiniteGroup) -> FiniteGroup {
        let rows: Vec<Vec<usize>> = self
            .members
            .iter()
            .map(|&a| {
                self.members
                    .iter()
                    .map(|&b| self.position(g.mul(a, b)).expect("closed"))
                    .collect()
            })
            .collect();
        let labels = self.members.iter().map(|&x| g.label(x)).collect();
        FiniteGroup::from_table(
            format!("{}<{}>", g.name(), self.members.len()),
            &rows,
            Some(labels),
            AssociativityCheck::Auto,
        )
        .expect("subgroup of a group is a group")
    }
}

fn normality_witness(
    g: &FiniteGroup,
    members: &[usize],
    position: &[Option<usize>],
) -> Option<(usize, usize)> {
    for x in 0..g.order() {
        for &s in members {
            if position[g.conj(x, s)].is_none() {
                return Some((s, x));
            }
        }
    }
    None
}

/// All normal subgroups of `g`, sorted by size then by member list.
///
/// Every normal subgroup is a union of conjugacy classes and is the join of
/// the normal closures of the classes it contains, so the lattice is built
/// by closing the set of single-class normal closures under joins.
pub fn enumerate_normal_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    if g.order() > NORMAL_SUBGROUP_LIMIT {
        return Err(Error::TooLarge {
            what: "group",
            size: g.order(),
            limit: NORMAL_SUBGROUP_LIMIT,
        });
    }
    let classes = g.conjugacy_classes();
    let atoms: BTreeSet<Vec<usize>> = classes.iter().map(|c| g.generate(c)).collect();
    let mut found: BTreeSet<Vec<usize>> = atoms.clone();
    found.insert(vec![g.identity()]);
    let mut frontier: Vec<Vec<usize>> = found.iter().cloned().collect();
    while let Some(h) = frontier.pop() {
        for a in &atoms {
            let mut gens = h.clone();
            gens.extend_from_slice(a);
            let join = g.generate(&gens);
            if found.insert(join.clone()) {
                frontier.push(join);
            }
        }
    }
    let mut subgroups: Vec<Subgroup> = found
        .iter()
        .map(|m| Subgroup::new(g, m))
        .collect::<Result<_>>()?;
    debug_assert!(subgroups.iter().all(Subgroup::is_normal));
    subgroups.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.members.cmp(&b.members))
    });
    Ok(subgroups)
}

/// `G = ⊔ xN` with minimal-index representatives and the factor group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetDecomposition {
    subgroup: Subgroup,
    representatives: Vec<usize>,
    coset_of: Vec<usize>,
    quotient: FiniteGroup,
}

impl CosetDecomposition {
    pub fn new(g: &FiniteGroup, n: &Subgroup) -> Result<Self> {
        n.require_normal(g)?;
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut representatives = Vec::new();
        for x in 0..g.order() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            for &s in n.members() {
                coset_of[g.mul(x, s)] = representatives.len();
            }
            representatives.push(x);
        }
        let rows: Vec<Vec<usize>> = representatives
            .iter()
            .map(|&a| {
                representatives
                    .iter()
                    .map(|&b| coset_of[g.mul(a, b)])
                    .collect()
            })
            .collect();
        let labels = representatives
            .iter()
            .map(|&r| format!("{}N", g.label(r)))
            .collect();
        let quotient = FiniteGroup::from_table(
            format!("{}/{}", g.name(), n.len()),
            &rows,
            Some(labels),
            AssociativityCheck::Auto,
        )?;
        Ok(CosetDecomposition {
            subgroup: n.clone(),
            representatives,
            coset_of,
            quotient,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn num_cosets(&self) -> usize {
        self.representatives.len()
    }

    #[inline]
    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x]
    }

    /// The canonical map `q: G → G/N` as an index array.
    pub fn projection(&self) -> &[usize] {
        &self.coset_of
    }

    pub fn quotient(&self) -> &FiniteGroup {
        &self.quotient
    }

    pub fn is_representative(&self, x: usize) -> bool {
        self.representatives[self.coset_of[x]] == x
    }
}

pub fn coset_decomposition(g: &FiniteGroup, n: &Subgroup) -> Result<CosetDecomposition> {
    CosetDecomposition::new(g, n)
}

/// Families available through [`builtin_group`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFamily {
    /// `Z_n`; element `k` is the residue `k`.
    Cyclic,
    /// Symmetries of the regular n-gon, order `2n`; index `k < n` is `r^k`,
    /// index `n + k` is `r^k s`.
    Dihedral,
    /// `S_n` for `n ≤ 5`; permutations of `0..n` in lexicographic order of
    /// one-line notation, composed right to left (`(στ)(i) = σ(τ(i))`).
    Symmetric,
    /// Quaternion group ordered `1, -1, i, -i, j, -j, k, -k`.
    Quaternion8,
    /// Upper unitriangular 3×3 matrices over `Z_p`, `p ∈ {2,3,5,7}`;
    /// `(a, b, c)` (entries 12, 23, 13) at index `a p² + b p + c`.
    HeisenbergMod,
}

impl std::str::FromStr for GroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cyclic" => Ok(Self::Cyclic),
            "dihedral" => Ok(Self::Dihedral),
            "symmetric" => Ok(Self::Symmetric),
            "quaternion8" | "quaternion" => Ok(Self::Quaternion8),
            "heisenberg_mod" | "heisenberg" => Ok(Self::HeisenbergMod),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

fn out_of_range(family: &str, parameter: i64, reason: &str) -> Error {
    Error::ParameterOutOfRange {
        family: family.into(),
        parameter,
        reason: reason.into(),
    }
}

/// Constructs one of the builtin groups with its documented ordering.
pub fn builtin_group(family: GroupFamily, parameter: i64) -> Result<FiniteGroup> {
    match family {
        GroupFamily::Cyclic => {
            if !(1..=4096).contains(&parameter) {
                return Err(out_of_range("cyclic", parameter, "expected 1 ≤ n ≤ 4096"));
            }
            let n = parameter as usize;
            let rows: Vec<Vec<usize>> = (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect();
            let name = if n == 1 {
                "trivial".to_string()
            } else {
                format!("Z{n}")
            };
            FiniteGroup::from_table(name, &rows, None, AssociativityCheck::Auto)
        }
        GroupFamily::Dihedral => {
            if !(1..=2048).contains(&parameter) {
                return Err(out_of_range("dihedral", parameter, "expected 1 ≤ n ≤ 2048"));
            }
            let n = parameter as usize;
            // (k, e) ~ r^k s^e; (r^a s^e)(r^b s^f) = r^(a + (-1)^e b) s^(e+f)
            let split = |x: usize| (x % n, x / n);
            let rows: Vec<Vec<usize>> = (0..2 * n)
                .map(|x| {
                    let (a, e) = split(x);
                    (0..2 * n)
                        .map(|y| {
                            let (b, f) = split(y);
                            let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                            ((e + f) % 2) * n + k
                        })
                        .collect()
                })
                .collect();
            let labels = (0..2 * n)
                .map(|x| {
                    let (k, e) = split(x);
                    let r = match k {
                        0 => String::new(),
                        1 => "r".to_string(),
                        _ => format!("r^{k}"),
                    };
                    match (r.is_empty(), e) {
                        (true, 0) => "e".to_string(),
                        (false, 0) => r,
                        (true, _) => "s".to_string(),
                        (false, _) => format!("{r}s"),
                    }
                })
                .collect();
            FiniteGroup::from_table(
                format!("D{n}"),
                &rows,
                Some(labels),
                AssociativityCheck::Auto,
            )
        }
        GroupFamily::Symmetric => {
            if !(1..=5).contains(&parameter) {
                return Err(out_of_range("symmetric", parameter, "expected 1 ≤ n ≤ 5"));
            }
            let perms = permutations(parameter as usize);
            let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
            let rows: Vec<Vec<usize>> = perms
                .iter()
                .map(|s| {
                    perms
                        .iter()
                        .map(|t| index(&t.iter().map(|&i| s[i]).collect::<Vec<_>>()))
                        .collect()
                })
                .collect();
            let labels = perms.iter().map(|p| cycle_notation(p)).collect();
            FiniteGroup::from_table(
                format!("S{parameter}"),
                &rows,
                Some(labels),
                AssociativityCheck::Auto,
            )
        }
        GroupFamily::Quaternion8 => {
            if parameter != 8 && parameter != 0 {
                return Err(out_of_range(
                    "quaternion8",
                    parameter,
                    "only order 8 is available",
                ));
            }
            // unit u ∈ {1,i,j,k} with sign; index = 2*u + (sign < 0)
            const UNIT: [[(usize, bool); 4]; 4] = [
                [(0, false), (1, false), (2, false), (3, false)],
                [(1, false), (0, true), (3, false), (2, true)],
                [(2, false), (3, true), (0, true), (1, false)],
                [(3, false), (2, false), (1, true), (0, true)],
            ];
            let rows: Vec<Vec<usize>> = (0..8)
                .map(|x| {
                    (0..8)
                        .map(|y| {
                            let (u, neg) = UNIT[x / 2][y / 2];
                            let sign = neg ^ (x % 2 == 1) ^ (y % 2 == 1);
                            2 * u + usize::from(sign)
                        })
                        .collect()
                })
                .collect();
            let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            FiniteGroup::from_table("Q8", &rows, Some(labels), AssociativityCheck::Auto)
        }
        GroupFamily::HeisenbergMod => {
            if ![2, 3, 5, 7].contains(&parameter) {
                return Err(out_of_range(
                    "heisenberg_mod",
                    parameter,
                    "expected a prime p ≤ 7",
                ));
            }
            let p = parameter as usize;
            let split = |x: usize| (x / (p * p), (x / p) % p, x % p);
            let rows: Vec<Vec<usize>> = (0..p * p * p)
                .map(|x| {
                    let (a, b, c) = split(x);
                    (0..p * p * p)
                        .map(|y| {
                            let (a2, b2, c2) = split(y);
                            let a3 = (a + a2) % p;
                            let b3 = (b + b2) % p;
                            let c3 = (c + c2 + a * b2) % p;
                            a3 * p * p + b3 * p + c3
                        })
                        .collect()
                })
                .collect();
            let labels = (0..p * p * p)
                .map(|x| {
                    let (a, b, c) = split(x);
                    format!("({a},{b},{c})")
                })
                .collect();
            FiniteGroup::from_table(
                format!("Heis{p}"),
                &rows,
                Some(labels),
                AssociativityCheck::Auto,
            )
        }
    }
}

/// Parses names such as `Z4`, `D4`, `S3`, `Q8`, `Heis3`, `trivial` and
/// direct products joined by `x` (`Z2xZ2`).
pub fn builtin_by_name(name: &str) -> Result<FiniteGroup> {
    let factors: Vec<&str> = name.split('x').collect();
    if factors.len() > 1 {
        let mut acc = builtin_by_name(factors[0])?;
        for f in &factors[1..] {
            acc = acc.direct_product(&builtin_by_name(f)?);
        }
        return Ok(acc.with_name(name));
    }
    let lower = name.to_ascii_lowercase();
    if lower == "trivial" || lower == "e" {
        return builtin_group(GroupFamily::Cyclic, 1);
    }
    let split_at = lower
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
    let (prefix, digits) = lower.split_at(split_at);
    let parameter: i64 = digits
        .parse()
        .map_err(|_| Error::UnknownFamily(name.to_string()))?;
    let family = match prefix {
        "z" | "c" => GroupFamily::Cyclic,
        "d" => GroupFamily::Dihedral,
        "s" => GroupFamily::Symmetric,
        "q" => GroupFamily::Quaternion8,
        "h" | "heis" => GroupFamily::HeisenbergMod,
        _ => return Err(Error::UnknownFamily(name.to_string())),
    };
    Ok(builtin_group(family, parameter)?.with_name(name))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// 1-based cycle notation, `e` for the identity.
fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}
