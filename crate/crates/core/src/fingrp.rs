//! Finite groups realized by explicit element enumeration: closure from
//! generators, subgroup generation, the three filtration series,
//! homomorphism search from finite presentations, and kernel filtrations.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::freewords::{FiltrationKind, Word};
use crate::residue::RingSpec;
use crate::unimat::{BarUniMat, UniMat};

/// Elements that can be closed into a [`FinGroup`].
pub trait GroupElement: Clone + Eq + Hash + Send + Sync + fmt::Display {
    fn op(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl GroupElement for UniMat {
    fn op(&self, other: &Self) -> Self {
        self.mul(other).expect("elements of one group share a shape")
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
}

impl GroupElement for BarUniMat {
    fn op(&self, other: &Self) -> Self {
        self.mul(other).expect("elements of one group share a shape")
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
}

/// Groups up to this order keep a full Cayley table.
pub const TABLE_LIMIT: usize = 4096;

type LookupFn = Arc<dyn Fn(u32, u32) -> u32 + Send + Sync>;

#[derive(Clone)]
enum Law {
    Table(Arc<Vec<u32>>),
    Lookup(LookupFn),
}

/// A finite group on the index set `0..order`, with `0` the identity.
#[derive(Clone)]
pub struct FinGroup {
    labels: Arc<Vec<String>>,
    generators: Vec<u32>,
    inverses: Arc<Vec<u32>>,
    law: Law,
}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinGroup")
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl FinGroup {
    /// Builds a group from a row-major Cayley table. Element 0 must be the identity.
    pub fn from_table(labels: Vec<String>, table: Vec<u32>, generators: Vec<u32>) -> Result<FinGroup> {
        let n = labels.len();
        if n == 0 || table.len() != n * n {
            return Err(Error::BadParams("Cayley table has the wrong size".into()));
        }
        if table.iter().any(|&x| x as usize >= n) || generators.iter().any(|&g| g as usize >= n) {
            return Err(Error::BadParams("Cayley table entry out of range".into()));
        }
        if (0..n).any(|i| table[i] != i as u32 || table[i * n] != i as u32) {
            return Err(Error::BadParams("element 0 is not the identity".into()));
        }
        let inverses = (0..n)
            .map(|i| {
                (0..n)
                    .find(|&j| table[i * n + j] == 0)
                    .map(|j| j as u32)
                    .ok_or_else(|| Error::BadParams(format!("element {} has no inverse", labels[i])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinGroup {
            labels: Arc::new(labels),
            generators,
            inverses: Arc::new(inverses),
            law: Law::Table(Arc::new(table)),
        })
    }

    pub fn trivial() -> FinGroup {
        FinGroup::from_table(vec!["e".into()], vec![0], vec![]).unwrap()
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// The same group with a different generating list, which must generate.
    pub fn with_generators(&self, gens: Vec<u32>) -> Result<FinGroup> {
        let g = FinGroup { generators: gens, ..self.clone() };
        if Subgroup::generate(&g, g.generators()).order() != g.order() {
            return Err(Error::BadParams("the given elements do not generate the group".into()));
        }
        Ok(g)
    }

    pub fn label(&self, a: u32) -> &str {
        &self.labels[a as usize]
    }

    pub fn index_of_label(&self, s: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == s).map(|i| i as u32)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.law {
            Law::Table(t) => t[a as usize * self.order() + b as usize],
            Law::Lookup(f) => f(a, b),
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        let mut base = if e < 0 { self.inv(a) } else { a };
        let mut k = e.unsigned_abs();
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Largest element order.
    pub fn exponent(&self) -> u64 {
        (0..self.order() as u32).map(|a| self.element_order(a)).max().unwrap_or(1)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Evaluates a word on generator images (`images[i]` is the image of `x_{i+1}`).
    pub fn eval_word(&self, w: &Word, images: &[u32]) -> u32 {
        w.letters()
            .iter()
            .fold(0, |acc, l| self.mul(acc, self.pow(images[l.gen as usize - 1], l.exp)))
    }

    /// Direct product, generated by the generators of both factors.
    pub fn direct_product(&self, other: &FinGroup) -> Result<FinGroup> {
        let (m, n) = (self.order(), other.order());
        if m * n > TABLE_LIMIT {
            return Err(Error::TooLarge(format!("direct product of order {}", m * n)));
        }
        let labels = (0..m * n)
            .map(|i| format!("({},{})", self.label((i / n) as u32), other.label((i % n) as u32)))
            .collect();
        let mut table = vec![0u32; m * n * m * n];
        for i in 0..m * n {
            for j in 0..m * n {
                let a = self.mul((i / n) as u32, (j / n) as u32) as usize;
                let b = other.mul((i % n) as u32, (j % n) as u32) as usize;
                table[i * m * n + j] = (a * n + b) as u32;
            }
        }
        let gens = self
            .generators
            .iter()
            .map(|&g| g * n as u32)
            .chain(other.generators.iter().copied())
            .collect();
        FinGroup::from_table(labels, table, gens)
    }
}

/// A closed group together with its concrete elements.
#[derive(Clone)]
pub struct ConcreteGroup<E> {
    pub group: FinGroup,
    elements: Arc<Vec<E>>,
    index: Arc<HashMap<E, u32>>,
}

impl<E: GroupElement + 'static> ConcreteGroup<E> {
    pub fn element(&self, i: u32) -> &E {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn index_of(&self, e: &E) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Breadth-first closure of `gens` under right multiplication. Element order
/// is the BFS discovery order, starting from the identity.
pub fn closure<E: GroupElement + 'static>(gens: &[E], identity: E, cap: usize) -> Result<ConcreteGroup<E>> {
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::from([(identity, 0u32)]);
    // right[x * k + g] = x * gens[g]; parent[y] = (x, g) with y = x * gens[g].
    let k = gens.len();
    let mut right: Vec<u32> = Vec::new();
    let mut parent: Vec<(u32, usize)> = vec![(0, usize::MAX)];
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head].clone();
        for (gi, g) in gens.iter().enumerate() {
            let y = x.op(g);
            let iy = match index.get(&y) {
                Some(&i) => i,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::TooLarge(format!("closure exceeds {cap} elements")));
                    }
                    let i = elements.len() as u32;
                    index.insert(y.clone(), i);
                    elements.push(y);
                    parent.push((head as u32, gi));
                    i
                }
            };
            right.push(iy);
        }
        head += 1;
    }
    let n = elements.len();
    let elements = Arc::new(elements);
    let index = Arc::new(index);
    let (law, inverses) = if n <= TABLE_LIMIT {
        // Columns in BFS order: a * b = (a * parent(b)) * g.
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            table[a * n] = a as u32;
        }
        for b in 1..n {
            let (pb, g) = parent[b];
            for a in 0..n {
                let ap = table[a * n + pb as usize] as usize;
                table[a * n + b] = right[ap * k + g];
            }
        }
        let inverses: Vec<u32> =
            (0..n).map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("finite group") as u32).collect();
        (Law::Table(Arc::new(table)), inverses)
    } else {
        let inverses: Vec<u32> = elements.par_iter().map(|e| index[&e.inv()]).collect();
        let (els, idx) = (elements.clone(), index.clone());
        (Law::Lookup(Arc::new(move |a, b| idx[&els[a as usize].op(&els[b as usize])])), inverses)
    };
    let generators = gens.iter().map(|g| index[g]).collect();
    let labels = elements.iter().map(|e| e.to_string()).collect();
    Ok(ConcreteGroup {
        group: FinGroup { labels: Arc::new(labels), generators, inverses: Arc::new(inverses), law },
        elements,
        index,
    })
}

/// `U_n(Λ)` for a finite ring, generated by `1 + e_{i,i+1}` (and, over
/// `Z/p^r`, nothing more is needed).
pub fn unitriangular_group(n: usize, spec: RingSpec, cap: usize) -> Result<ConcreteGroup<UniMat>> {
    if !spec.is_finite() {
        return Err(Error::BadParams("U_n(Z) is infinite".into()));
    }
    let gens = (0..n.saturating_sub(1))
        .map(|i| UniMat::elementary(n, spec, i, i + 1, spec.one()))
        .collect::<Result<Vec<_>>>()?;
    closure(&gens, UniMat::identity(n, spec), cap)
}

/// A subgroup stored as a membership mask plus its sorted members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    mask: Vec<bool>,
    members: Vec<u32>,
    gens: Vec<u32>,
}

impl Subgroup {
    pub fn trivial(g: &FinGroup) -> Subgroup {
        let mut mask = vec![false; g.order()];
        mask[0] = true;
        Subgroup { mask, members: vec![0], gens: vec![] }
    }

    pub fn whole(g: &FinGroup) -> Subgroup {
        Subgroup {
            mask: vec![true; g.order()],
            members: (0..g.order() as u32).collect(),
            gens: g.generators().to_vec(),
        }
    }

    /// Plain closure of the listed elements.
    pub fn generate(g: &FinGroup, elems: &[u32]) -> Subgroup {
        let mut h = Subgroup::trivial(g);
        for &e in elems {
            h.add(g, e);
        }
        h
    }

    /// Enlarges the subgroup by one element, re-closing incrementally.
    pub fn add(&mut self, g: &FinGroup, e: u32) {
        if self.mask[e as usize] {
            return;
        }
        self.gens.push(e);
        let mut queue: Vec<u32> = self.members.clone();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &s in &self.gens {
                let y = g.mul(x, s);
                if !self.mask[y as usize] {
                    self.mask[y as usize] = true;
                    queue.push(y);
                }
            }
        }
        self.members = (0..self.mask.len() as u32).filter(|&i| self.mask[i as usize]).collect();
    }

    pub fn contains(&self, e: u32) -> bool {
        self.mask[e as usize]
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&e| other.contains(e))
    }

    pub fn is_normal(&self, g: &FinGroup) -> bool {
        g.generators().iter().all(|&s| {
            let si = g.inv(s);
            self.members.iter().all(|&h| self.contains(g.mul(g.mul(si, h), s)))
        })
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let mask: Vec<bool> = self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect();
        let members: Vec<u32> = (0..mask.len() as u32).filter(|&i| mask[i as usize]).collect();
        Subgroup { gens: members.clone(), mask, members }
    }

    fn from_mask(mask: Vec<bool>) -> Subgroup {
        let members: Vec<u32> = (0..mask.len() as u32).filter(|&i| mask[i as usize]).collect();
        Subgroup { gens: members.clone(), mask, members }
    }
}

/// `[H, K]`, generated by all commutators.
pub fn commutator_subgroup(g: &FinGroup, h: &Subgroup, k: &Subgroup) -> Subgroup {
    let mut out = Subgroup::trivial(g);
    for &a in h.members() {
        for &b in k.members() {
            let c = g.commutator(a, b);
            if !out.contains(c) {
                out.add(g, c);
            }
        }
    }
    out
}

/// `H^p`, generated by all `p`-th powers.
pub fn power_subgroup(g: &FinGroup, h: &Subgroup, p: u64) -> Subgroup {
    let mut out = Subgroup::trivial(g);
    for &a in h.members() {
        let c = g.pow(a, p as i64);
        if !out.contains(c) {
            out.add(g, c);
        }
    }
    out
}

fn join(g: &FinGroup, mut a: Subgroup, b: &Subgroup) -> Subgroup {
    for &x in b.members() {
        if !a.contains(x) {
            a.add(g, x);
        }
    }
    a
}

/// Terms `1..=levels.len()` of a descending series; level `n` is `levels[n-1]`.
#[derive(Clone, Debug)]
pub struct SeriesTable {
    pub kind: FiltrationKind,
    pub levels: Vec<Subgroup>,
    /// Whether every later term equals the last stored one.
    pub stable: bool,
}

impl SeriesTable {
    pub fn level(&self, n: usize) -> Option<&Subgroup> {
        if n == 0 {
            return None;
        }
        match self.levels.get(n - 1) {
            Some(s) => Some(s),
            None if self.stable => self.levels.last(),
            None => None,
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        self.levels.iter().map(Subgroup::order).collect()
    }
}

/// The lower central, p-central or p-Zassenhaus series of `g`.
///
/// Lower central and p-central terms are computed until they repeat (or up
/// to `max_level`); Zassenhaus terms until trivial (or up to `max_level`).
pub fn series(g: &FinGroup, kind: FiltrationKind, max_level: usize) -> Result<SeriesTable> {
    let whole = Subgroup::whole(g);
    let mut levels = vec![whole.clone()];
    let mut stable = false;
    while levels.len() < max_level.max(1) {
        let n = levels.len() + 1;
        let prev = levels.last().unwrap();
        let next = match kind {
            FiltrationKind::LowerCentral => commutator_subgroup(g, prev, &whole),
            FiltrationKind::PCentral { p } => {
                join(g, power_subgroup(g, prev, p), &commutator_subgroup(g, prev, &whole))
            }
            FiltrationKind::Zassenhaus { p } => {
                let src = &levels[n.div_ceil(p as usize) - 1];
                let mut acc = power_subgroup(g, src, p);
                for i in 1..=n / 2 {
                    acc = join(g, acc, &commutator_subgroup(g, &levels[i - 1], &levels[n - i - 1]));
                }
                acc
            }
        };
        assert!(next.is_normal(g), "series term {n} of {kind} is not normal");
        let repeat = &next == prev;
        let trivial = next.is_trivial();
        levels.push(next);
        if trivial || (repeat && !matches!(kind, FiltrationKind::Zassenhaus { .. })) {
            stable = true;
            break;
        }
    }
    Ok(SeriesTable { kind, levels, stable })
}

/// Rank and relators of a finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub rank: usize,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(rank: usize, relators: Vec<Word>) -> Result<Presentation> {
        let relators = relators.into_iter().map(|r| r.with_rank(rank)).collect::<Result<_>>()?;
        Ok(Presentation { rank, relators })
    }

    /// Parses `rank N` followed by one relator per line; blank lines and
    /// `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Presentation> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| Error::Parse("empty presentation".into()))?;
        let rank: usize = head
            .strip_prefix("rank")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected `rank N`, got `{head}`")))?;
        let relators = lines.map(|l| Word::parse_with_rank(l, rank)).collect::<Result<Vec<_>>>()?;
        Ok(Presentation { rank, relators })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank {}", self.rank)?;
        for r in &self.relators {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Predicate on a prefix of generator images, consulted once `depth` images are set.
pub type PrefixFilter = Arc<dyn Fn(&FinGroup, &[u32]) -> bool + Send + Sync>;

/// Options for [`enumerate_homs`].
#[derive(Clone)]
pub struct HomSearch {
    pub node_budget: u64,
    pub prefix_filter: Option<(usize, PrefixFilter)>,
}

impl Default for HomSearch {
    fn default() -> Self {
        HomSearch { node_budget: Limits::default().hom_nodes, prefix_filter: None }
    }
}

struct HomDfs<'a> {
    h: &'a FinGroup,
    checks: Vec<Vec<&'a Word>>,
    filter: Option<(usize, PrefixFilter)>,
    nodes: &'a AtomicU64,
    budget: u64,
    abort: &'a AtomicBool,
}

impl HomDfs<'_> {
    fn run(&self, images: &mut Vec<u32>, rank: usize, out: &mut dyn FnMut(&[u32])) -> Result<()> {
        let depth = images.len();
        if depth > 0 {
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
                self.abort.store(true, Ordering::Relaxed);
            }
            if self.abort.load(Ordering::Relaxed) {
                return Err(Error::TooLarge(format!("homomorphism search exceeded {} nodes", self.budget)));
            }
            if self.checks[depth - 1].iter().any(|r| self.h.eval_word(r, images) != 0) {
                return Ok(());
            }
            if let Some((d, f)) = &self.filter {
                if *d == depth && !f(self.h, images) {
                    return Ok(());
                }
            }
        }
        if depth == rank {
            out(images);
            return Ok(());
        }
        for a in 0..self.h.order() as u32 {
            images.push(a);
            let r = self.run(images, rank, out);
            images.pop();
            r?;
        }
        Ok(())
    }
}

fn search_homs<T: Send>(
    pres: &Presentation,
    h: &FinGroup,
    opts: &HomSearch,
    make: impl Fn() -> T + Sync,
    visit: impl Fn(&mut T, &[u32]) + Sync,
) -> Result<Vec<T>> {
    let mut checks: Vec<Vec<&Word>> = vec![Vec::new(); pres.rank.max(1)];
    for r in &pres.relators {
        let m = r.max_generator();
        if m > 0 {
            checks[m - 1].push(r);
        }
    }
    let nodes = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let dfs = HomDfs {
        h,
        checks,
        filter: opts.prefix_filter.clone(),
        nodes: &nodes,
        budget: opts.node_budget,
        abort: &abort,
    };
    if pres.rank == 0 {
        let mut t = make();
        visit(&mut t, &[]);
        return Ok(vec![t]);
    }
    (0..h.order() as u32)
        .into_par_iter()
        .map(|a| {
            let mut t = make();
            let mut images = vec![a];
            dfs.run(&mut images, pres.rank, &mut |img| visit(&mut t, img))?;
            Ok(t)
        })
        .collect()
}

/// All generator-image tuples `(h_1, …, h_N)` killing every relator, in
/// lexicographic order of the tuple.
pub fn enumerate_homs(pres: &Presentation, h: &FinGroup, opts: &HomSearch) -> Result<Vec<Vec<u32>>> {
    let parts = search_homs(pres, h, opts, Vec::new, |acc: &mut Vec<Vec<u32>>, img| acc.push(img.to_vec()))?;
    Ok(parts.into_iter().flatten().collect())
}

/// Number of homomorphisms, without storing them.
pub fn count_homs(pres: &Presentation, h: &FinGroup, opts: &HomSearch) -> Result<u64> {
    let parts = search_homs(pres, h, opts, || 0u64, |acc: &mut u64, _| *acc += 1)?;
    Ok(parts.into_iter().sum())
}

/// Extends generator images to a map on all of `g`, walking the Cayley graph.
/// Returns `None` when the assignment is not a homomorphism.
pub fn extend_homomorphism<T: Clone + PartialEq>(
    g: &FinGroup,
    gen_images: &[T],
    identity: T,
    op: impl Fn(&T, &T) -> T,
) -> Option<Vec<T>> {
    assert_eq!(gen_images.len(), g.generators().len());
    let mut img: Vec<Option<T>> = vec![None; g.order()];
    img[0] = Some(identity);
    let mut queue = vec![0u32];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let ix = img[x as usize].clone().unwrap();
        for (k, &s) in g.generators().iter().enumerate() {
            let y = g.mul(x, s) as usize;
            let cand = op(&ix, &gen_images[k]);
            match &img[y] {
                Some(v) if *v != cand => return None,
                Some(_) => {}
                None => {
                    img[y] = Some(cand);
                    queue.push(y as u32);
                }
            }
        }
    }
    img.into_iter().collect()
}

/// `⋂ ker(ρ : G → U_n(F_p))` over all homomorphisms, by exhaustive search
/// over generator images.
pub fn kernel_filtration(g: &FinGroup, n: usize, p: u64, limits: &Limits) -> Result<Subgroup> {
    let target = unitriangular_group(n, RingSpec::prime_field(p)?, limits.group_cap)?.group;
    kernel_intersection(g, &target, limits)
}

/// `⋂ ker(ρ : G → H)` over all homomorphisms into `H`.
pub fn kernel_intersection(g: &FinGroup, target: &FinGroup, limits: &Limits) -> Result<Subgroup> {
    let k = g.generators().len();
    let total = (target.order() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > limits.hom_nodes as u128 {
        return Err(Error::TooLarge(format!("{total} candidate homomorphisms")));
    }
    if k == 0 {
        return Ok(Subgroup::whole(g));
    }
    let hsize = target.order() as u64;
    let mask = (0..total as u64)
        .into_par_iter()
        .fold(
            || vec![true; g.order()],
            |mut mask, mut code| {
                let images: Vec<u32> = (0..k)
                    .map(|_| {
                        let a = (code % hsize) as u32;
                        code /= hsize;
                        a
                    })
                    .collect();
                if let Some(img) = extend_homomorphism(g, &images, 0u32, |a, b| target.mul(*a, *b)) {
                    for (x, m) in mask.iter_mut().enumerate() {
                        *m &= img[x] == 0;
                    }
                }
                mask
            },
        )
        .reduce(|| vec![true; g.order()], |a, b| a.iter().zip(&b).map(|(x, y)| *x && *y).collect());
    Ok(Subgroup::from_mask(mask))
}

/// Inclusions between the p-central and p-Zassenhaus series of one group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationComparison {
    pub p: u64,
    /// `(i, G^(i) ⊆ G_(i))` for `i = 1..=max_level`.
    pub pcentral_in_zassenhaus: Vec<(usize, bool)>,
    /// `G_(p+1) ⊆ G^(3)`.
    pub zassenhaus_p1_in_pcentral_3: bool,
    /// `G^(3) = G_(3)`, reported for `p = 2` only.
    pub level3_equal: Option<bool>,
    /// `(G_(p+1) ⊆ G_<p+1>, G_<p+1> ⊆ G^(3))`, when requested.
    pub kernel_chain: Option<(bool, bool)>,
    pub zassenhaus_orders: Vec<usize>,
    pub pcentral_orders: Vec<usize>,
}

impl FiltrationComparison {
    pub fn all_hold(&self) -> bool {
        self.pcentral_in_zassenhaus.iter().all(|(_, b)| *b)
            && self.zassenhaus_p1_in_pcentral_3
            && self.level3_equal.unwrap_or(true)
            && self.kernel_chain.is_none_or(|(a, b)| a && b)
    }
}

pub fn compare_filtrations(
    g: &FinGroup,
    p: u64,
    max_level: usize,
    with_kernel: bool,
    limits: &Limits,
) -> Result<FiltrationComparison> {
    RingSpec::prime_field(p)?;
    let depth = max_level.max(p as usize + 1).max(3);
    let z = series(g, FiltrationKind::Zassenhaus { p }, depth)?;
    let pc = series(g, FiltrationKind::PCentral { p }, depth)?;
    let lvl = |t: &SeriesTable, i: usize| t.level(i).cloned().expect("series computed to depth");
    let pcentral_in_zassenhaus =
        (1..=max_level).map(|i| (i, lvl(&pc, i).is_subset_of(&lvl(&z, i)))).collect();
    let zp1 = lvl(&z, p as usize + 1);
    let pc3 = lvl(&pc, 3);
    let zassenhaus_p1_in_pcentral_3 = zp1.is_subset_of(&pc3);
    let level3_equal = (p == 2).then(|| lvl(&z, 3) == pc3);
    let kernel_chain = if with_kernel {
        let k = kernel_filtration(g, p as usize + 1, p, limits)?;
        Some((zp1.is_subset_of(&k), k.is_subset_of(&pc3)))
    } else {
        None
    };
    Ok(FiltrationComparison {
        p,
        pcentral_in_zassenhaus,
        zassenhaus_p1_in_pcentral_3,
        level3_equal,
        kernel_chain,
        zassenhaus_orders: z.orders(),
        pcentral_orders: pc.orders(),
    })
}
