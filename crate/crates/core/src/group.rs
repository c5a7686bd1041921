//! Small finite groups stored as full Cayley tables.
//!
//! Every group in this crate is materialized: elements are dense indices
//! `0..order`, products are a table lookup and inverses are precomputed.
//! Groups come from three places: cyclic groups, direct products, and the
//! closure of a set of permutations. A raw table can also be imported, in
//! which case the group axioms are checked before the value is handed out.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

/// Largest group order accepted by the constructors unless a caller raises it.
pub const DEFAULT_ORDER_CAP: usize = 1024;

/// Associativity is checked triple-by-triple up to this order, and with
/// Light's generator test above it.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

fn next_id() -> u64 {
    NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group order {0}")]
    InvalidOrder(usize),
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("not a permutation of 0..{degree}: {detail}")]
    NotAPermutation { degree: usize, detail: String },
    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),
    #[error("operands belong to different groups")]
    MismatchedGroup,
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("cannot parse group element `{0}`")]
    UnknownElement(String),
    #[error("unknown group spec `{0}`")]
    UnknownSpec(String),
}

/// A handle on one element of a specific group.
///
/// Carries the owning group's identity so that mixing elements of two
/// different groups is caught instead of silently producing garbage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group_id: u64,
    index: usize,
}

impl GroupElement {
    pub fn index(self) -> usize {
        self.index
    }
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    id: u64,
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    identity: usize,
    abelian: bool,
    names: Vec<String>,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    name_lookup: HashMap<String, usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Assembles a group from a table already known to satisfy the axioms.
    fn from_trusted(
        order: usize,
        table: Vec<u16>,
        names: Vec<String>,
        generators: Vec<usize>,
        generator_names: Vec<String>,
    ) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x))
            .expect("trusted table has an identity");
        let mut inverses = vec![0u16; order];
        for x in 0..order {
            let inv = (0..order)
                .find(|&y| table[x * order + y] as usize == identity)
                .expect("trusted table has inverses");
            inverses[x] = inv as u16;
        }
        let abelian = (0..order)
            .all(|x| (x + 1..order).all(|y| table[x * order + y] == table[y * order + x]));
        let name_lookup = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        FiniteGroup {
            id: next_id(),
            order,
            table,
            inverses,
            identity,
            abelian,
            names,
            generators,
            generator_names,
            name_lookup,
        }
    }

    /// The cyclic group Z_n with elements labelled by their residues.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        Self::cyclic_impl(n, None)
    }

    /// The cyclic group Z_n written multiplicatively as powers of `generator`.
    pub fn cyclic_named(n: usize, generator: &str) -> Result<Self, GroupError> {
        Self::cyclic_impl(n, Some(generator))
    }

    fn cyclic_impl(n: usize, generator: Option<&str>) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidOrder(0));
        }
        if n > DEFAULT_ORDER_CAP {
            return Err(GroupError::OrderTooLarge {
                order: n,
                cap: DEFAULT_ORDER_CAP,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(((x + y) % n) as u16);
            }
        }
        let generators = if n > 1 { vec![1] } else { Vec::new() };
        let (names, generator_names) = match generator {
            Some(g) => (
                (0..n).map(|i| power_word(g, i)).collect(),
                vec![g.to_string()],
            ),
            None => ((0..n).map(|i| i.to_string()).collect(), Vec::new()),
        };
        Ok(Self::from_trusted(
            n,
            table,
            names,
            generators,
            generator_names,
        ))
    }

    /// Componentwise product G1 x G2. Element `(i, j)` gets index `i * |G2| + j`.
    ///
    /// When both factors carry disjoint generator names the product is named
    /// by concatenating words (`a^2` and `b` give `a^2b`); otherwise elements
    /// are named as pairs.
    pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<Self, GroupError> {
        let (n1, n2) = (g1.order, g2.order);
        let order = n1 * n2;
        if order > DEFAULT_ORDER_CAP {
            return Err(GroupError::OrderTooLarge {
                order,
                cap: DEFAULT_ORDER_CAP,
            });
        }
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (x1, x2) = (x / n2, x % n2);
            for y in 0..order {
                let (y1, y2) = (y / n2, y % n2);
                let p = g1.mul(x1, y1) * n2 + g2.mul(x2, y2);
                table.push(p as u16);
            }
        }
        let worded = !g1.generator_names.is_empty()
            && !g2.generator_names.is_empty()
            && g1
                .generator_names
                .iter()
                .all(|n| !g2.generator_names.contains(n));
        let names = (0..order)
            .map(|x| {
                let (a, b) = (&g1.names[x / n2], &g2.names[x % n2]);
                if worded {
                    match (x / n2 == g1.identity, x % n2 == g2.identity) {
                        (true, true) => "1".to_string(),
                        (true, false) => b.clone(),
                        (false, true) => a.clone(),
                        (false, false) => format!("{a}{b}"),
                    }
                } else {
                    format!("({a},{b})")
                }
            })
            .collect();
        let mut generators: Vec<usize> = g1
            .generators
            .iter()
            .map(|&g| g * n2 + g2.identity)
            .collect();
        generators.extend(g2.generators.iter().map(|&g| g1.identity * n2 + g));
        let generator_names = if worded {
            g1.generator_names
                .iter()
                .chain(&g2.generator_names)
                .cloned()
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self::from_trusted(
            order,
            table,
            names,
            generators,
            generator_names,
        ))
    }

    /// Iterated direct product of named cyclic groups, e.g.
    /// `[(4, "a"), (2, "b"), (2, "c")]` for `<a,b,c : a^4=b^2=c^2=1>`.
    pub fn abelian(factors: &[(usize, &str)]) -> Result<Self, GroupError> {
        let mut iter = factors.iter();
        let Some(&(n, g)) = iter.next() else {
            return Self::cyclic(1);
        };
        let mut acc = Self::cyclic_named(n, g)?;
        for &(n, g) in iter {
            acc = Self::direct_product(&acc, &Self::cyclic_named(n, g)?)?;
        }
        Ok(acc)
    }

    /// Closure of a set of permutations of `0..degree` under composition.
    ///
    /// Permutations are image lists (`perm[i]` is the image of `i`) and the
    /// product `x * y` applies `x` first, then `y`. Elements are indexed in
    /// the lexicographic order of their normal form `g1^e1 g2^e2 ...`, which
    /// also provides their display names.
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<usize>],
        generator_names: Option<&[String]>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        for (gi, perm) in generators.iter().enumerate() {
            if perm.len() != degree {
                return Err(GroupError::NotAPermutation {
                    degree,
                    detail: format!("generator {gi} has length {}", perm.len()),
                });
            }
            let mut seen = vec![false; degree];
            for &p in perm {
                if p >= degree || seen[p] {
                    return Err(GroupError::NotAPermutation {
                        degree,
                        detail: format!("generator {gi} repeats or exceeds image {p}"),
                    });
                }
                seen[p] = true;
            }
        }
        let names: Vec<String> = match generator_names {
            Some(n) if n.len() == generators.len() => n.to_vec(),
            Some(n) => {
                return Err(GroupError::NotAPermutation {
                    degree,
                    detail: format!(
                        "{} generator names given for {} generators",
                        n.len(),
                        generators.len()
                    ),
                })
            }
            None => default_generator_names(generators.len()),
        };

        let compose =
            |x: &[u16], y: &[u16]| -> Vec<u16> { x.iter().map(|&p| y[p as usize]).collect() };
        let identity: Vec<u16> = (0..degree as u16).collect();
        let gens: Vec<Vec<u16>> = generators
            .iter()
            .map(|p| p.iter().map(|&i| i as u16).collect())
            .collect();

        // Breadth-first closure; also remembers one shortest word per element.
        let mut words: HashMap<Vec<u16>, Vec<usize>> = HashMap::new();
        let mut bfs_order = vec![identity.clone()];
        words.insert(identity.clone(), Vec::new());
        let mut queue = VecDeque::from([identity.clone()]);
        while let Some(p) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let q = compose(&p, g);
                if !words.contains_key(&q) {
                    if words.len() >= cap {
                        return Err(GroupError::OrderTooLarge {
                            order: words.len() + 1,
                            cap,
                        });
                    }
                    let mut w = words[&p].clone();
                    w.push(gi);
                    words.insert(q.clone(), w);
                    bfs_order.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        let order = bfs_order.len();

        // Normal-form enumeration, first generator most significant.
        let gen_orders: Vec<usize> = gens
            .iter()
            .map(|g| {
                let mut k = 1;
                let mut p = g.clone();
                while p != identity {
                    p = compose(&p, g);
                    k += 1;
                }
                k
            })
            .collect();
        let mut elements: Vec<Vec<u16>> = Vec::with_capacity(order);
        let mut element_names: Vec<String> = Vec::with_capacity(order);
        let mut placed: HashSet<Vec<u16>> = HashSet::new();
        let space: Option<usize> = gen_orders
            .iter()
            .try_fold(1usize, |acc, &o| acc.checked_mul(o))
            .filter(|&s| s <= 1 << 20);
        if let Some(space) = space {
            let mut exps = vec![0usize; gens.len()];
            for _ in 0..space {
                let mut p = identity.clone();
                for (gi, &e) in exps.iter().enumerate() {
                    for _ in 0..e {
                        p = compose(&p, &gens[gi]);
                    }
                }
                if placed.insert(p.clone()) {
                    let word: String = exps
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(gi, &e)| power_word(&names[gi], e))
                        .collect();
                    element_names.push(if word.is_empty() { "1".into() } else { word });
                    elements.push(p);
                    if elements.len() == order {
                        break;
                    }
                }
                // odometer step, last generator fastest
                for gi in (0..exps.len()).rev() {
                    exps[gi] += 1;
                    if exps[gi] < gen_orders[gi] {
                        break;
                    }
                    exps[gi] = 0;
                }
            }
        }
        for p in &bfs_order {
            if placed.insert(p.clone()) {
                element_names.push(compress_word(&words[p], &names));
                elements.push(p.clone());
            }
        }

        let index: HashMap<&[u16], usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let mut table = Vec::with_capacity(order * order);
        for x in &elements {
            for y in &elements {
                table.push(index[compose(x, y).as_slice()] as u16);
            }
        }
        let gen_indices = gens.iter().map(|g| index[g.as_slice()]).collect();
        Ok(Self::from_trusted(
            order,
            table,
            element_names,
            gen_indices,
            names,
        ))
    }

    /// Imports a raw Cayley table, checking every group axiom.
    pub fn from_table(
        table: &[Vec<usize>],
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::InvalidOrder(0));
        }
        if order > DEFAULT_ORDER_CAP {
            return Err(GroupError::OrderTooLarge {
                order,
                cap: DEFAULT_ORDER_CAP,
            });
        }
        let mut flat = Vec::with_capacity(order * order);
        for (x, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::MalformedTable(format!(
                    "row {x} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &p in row {
                if p >= order {
                    return Err(GroupError::MalformedTable(format!(
                        "entry {p} in row {x} is out of range"
                    )));
                }
                flat.push(p as u16);
            }
        }
        check_latin(order, &flat)?;
        let identity = (0..order)
            .find(|&e| {
                (0..order)
                    .all(|x| flat[e * order + x] as usize == x && flat[x * order + e] as usize == x)
            })
            .ok_or_else(|| GroupError::MalformedTable("no two-sided identity".into()))?;
        for x in 0..order {
            // Latin rows give a unique right inverse; it must also be a left inverse.
            let y = (0..order)
                .find(|&y| flat[x * order + y] as usize == identity)
                .expect("latin row contains the identity");
            if flat[y * order + x] as usize != identity {
                return Err(GroupError::MalformedTable(format!(
                    "element {x} has no two-sided inverse"
                )));
            }
        }
        if order <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            check_associative_exhaustive(order, &flat)?;
        } else {
            check_associative_light(order, identity, &flat)?;
        }
        let names = match names {
            Some(n) if n.len() == order => {
                let distinct: HashSet<&String> = n.iter().collect();
                if distinct.len() != order {
                    return Err(GroupError::MalformedTable(
                        "element names are not distinct".into(),
                    ));
                }
                n
            }
            Some(n) => {
                return Err(GroupError::MalformedTable(format!(
                    "{} names for a group of order {order}",
                    n.len()
                )))
            }
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        Ok(Self::from_trusted(
            order,
            flat,
            names,
            Vec::new(),
            Vec::new(),
        ))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// Generators recorded by the constructor (may be empty for imported tables).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Unchecked product of two element indices.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x] as usize
    }

    /// `x^t` for any integer `t`.
    pub fn pow(&self, x: usize, t: i64) -> usize {
        let (mut base, mut e) = if t < 0 {
            (self.inv(x), t.unsigned_abs())
        } else {
            (x, t as u64)
        };
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut p = x;
        while p != self.identity {
            p = self.mul(p, x);
            k += 1;
        }
        k
    }

    pub fn element(&self, index: usize) -> Result<GroupElement, GroupError> {
        if index >= self.order {
            return Err(GroupError::IndexOutOfRange {
                index,
                order: self.order,
            });
        }
        Ok(GroupElement {
            group_id: self.id,
            index,
        })
    }

    fn owns(&self, x: GroupElement) -> Result<usize, GroupError> {
        if x.group_id != self.id {
            return Err(GroupError::MismatchedGroup);
        }
        Ok(x.index)
    }

    pub fn multiply(&self, x: GroupElement, y: GroupElement) -> Result<GroupElement, GroupError> {
        let p = self.mul(self.owns(x)?, self.owns(y)?);
        Ok(GroupElement {
            group_id: self.id,
            index: p,
        })
    }

    pub fn inverse(&self, x: GroupElement) -> Result<GroupElement, GroupError> {
        let i = self.inv(self.owns(x)?);
        Ok(GroupElement {
            group_id: self.id,
            index: i,
        })
    }

    /// Nonempty and closed under products and inverses.
    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        if subset.is_empty() || subset.iter().any(|&x| x >= self.order) {
            return false;
        }
        let mut member = vec![false; self.order];
        for &x in subset {
            member[x] = true;
        }
        subset
            .iter()
            .all(|&x| member[self.inv(x)] && subset.iter().all(|&y| member[self.mul(x, y)]))
    }

    /// Elements commuting with every element.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|x| self.mul(z, x) == self.mul(x, z)))
            .collect()
    }

    /// Resolves a textual element: an exact element name, `1`/`e` for the
    /// identity, or a word in the named generators such as `a^2b^-1c` or `a²b³`.
    pub fn parse_element(&self, text: &str) -> Result<usize, GroupError> {
        let text = text.trim();
        if let Some(&i) = self.name_lookup.get(text) {
            return Ok(i);
        }
        if text == "1" || text == "e" {
            return Ok(self.identity);
        }
        self.parse_word(text)
            .ok_or_else(|| GroupError::UnknownElement(text.to_string()))
    }

    fn parse_word(&self, text: &str) -> Option<usize> {
        if self.generator_names.is_empty() || text.is_empty() {
            return None;
        }
        let chars: Vec<char> = text.chars().collect();
        let mut acc = self.identity;
        let mut i = 0;
        while i < chars.len() {
            let (gen_pos, consumed) = self
                .generator_names
                .iter()
                .enumerate()
                .filter(|(_, n)| {
                    let nc: Vec<char> = n.chars().collect();
                    chars[i..].starts_with(&nc)
                })
                .map(|(gi, n)| (gi, n.chars().count()))
                .max_by_key(|&(_, len)| len)?;
            i += consumed;
            let mut exponent: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                exponent = s.parse().ok()?;
            } else {
                let start = i;
                let mut s = String::new();
                while i < chars.len() {
                    match superscript_digit(chars[i]) {
                        Some(c) => s.push(c),
                        None => break,
                    }
                    i += 1;
                }
                if i > start {
                    exponent = s.parse().ok()?;
                }
            }
            acc = self.mul(acc, self.pow(self.generators[gen_pos], exponent));
        }
        Some(acc)
    }

    /// Cayley table as nested index lists.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|x| (0..self.order).map(|y| self.mul(x, y)).collect())
            .collect()
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "group of order {} ({})",
            self.order,
            if self.abelian {
                "abelian"
            } else {
                "non-abelian"
            }
        )
    }
}

fn default_generator_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{i}_")
            }
        })
        .collect()
}

fn power_word(generator: &str, exponent: usize) -> String {
    match exponent {
        0 => "1".to_string(),
        1 => generator.to_string(),
        e => format!("{generator}^{e}"),
    }
}

fn compress_word(word: &[usize], names: &[String]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        out.push_str(&power_word(&names[word[i]], j - i));
        i = j;
    }
    out
}

fn superscript_digit(c: char) -> Option<char> {
    Some(match c {
        '⁰' => '0',
        '¹' => '1',
        '²' => '2',
        '³' => '3',
        '⁴' => '4',
        '⁵' => '5',
        '⁶' => '6',
        '⁷' => '7',
        '⁸' => '8',
        '⁹' => '9',
        '⁻' => '-',
        _ => return None,
    })
}

fn check_latin(order: usize, table: &[u16]) -> Result<(), GroupError> {
    let mut seen = vec![false; order];
    for x in 0..order {
        seen.fill(false);
        for y in 0..order {
            let p = table[x * order + y] as usize;
            if std::mem::replace(&mut seen[p], true) {
                return Err(GroupError::MalformedTable(format!(
                    "row {x} repeats {p} (cancellation fails)"
                )));
            }
        }
    }
    for y in 0..order {
        seen.fill(false);
        for x in 0..order {
            let p = table[x * order + y] as usize;
            if std::mem::replace(&mut seen[p], true) {
                return Err(GroupError::MalformedTable(format!(
                    "column {y} repeats {p} (cancellation fails)"
                )));
            }
        }
    }
    Ok(())
}

fn check_associative_exhaustive(order: usize, t: &[u16]) -> Result<(), GroupError> {
    let m = |x: usize, y: usize| t[x * order + y] as usize;
    for x in 0..order {
        for y in 0..order {
            let xy = m(x, y);
            for z in 0..order {
                if m(xy, z) != m(x, m(y, z)) {
                    return Err(GroupError::MalformedTable(format!(
                        "associativity fails for ({x},{y},{z})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Light's test: the elements `a` with `(xa)y = x(ay)` for all `x, y` are
/// closed under products, so checking a generating set suffices.
fn check_associative_light(order: usize, identity: usize, t: &[u16]) -> Result<(), GroupError> {
    let m = |x: usize, y: usize| t[x * order + y] as usize;
    let mut reached = vec![false; order];
    reached[identity] = true;
    let mut frontier = vec![identity];
    let mut gens: Vec<usize> = Vec::new();
    loop {
        // extend the set of products of generators, right-multiplying only
        while let Some(p) = frontier.pop() {
            for &g in &gens {
                let q = m(p, g);
                if !reached[q] {
                    reached[q] = true;
                    frontier.push(q);
                }
            }
        }
        match reached.iter().position(|&r| !r) {
            None => break,
            Some(g) => {
                gens.push(g);
                frontier = (0..order).filter(|&x| reached[x]).collect();
            }
        }
    }
    for &g in &gens {
        for x in 0..order {
            let xg = m(x, g);
            for y in 0..order {
                if m(xg, y) != m(x, m(g, y)) {
                    return Err(GroupError::MalformedTable(format!(
                        "associativity fails for ({x},{g},{y})"
                    )));
                }
            }
        }
    }
    Ok(())
}
