use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use super::line::{perp, Line};
use crate::formula::{Formula, Term};

/// Finite structure for `{O, =}` with elements `0..size`.
///
/// `O` is kept symmetric and irreflexive. Structures built from lines keep
/// the source lines, with element `i` standing for `lines[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    size: usize,
    adjacency: Vec<bool>,
    lines: Option<Vec<Line>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("duplicate line {line} at positions {first} and {second}")]
    DuplicateLine {
        line: Line,
        first: usize,
        second: usize,
    },
    #[error("element {element} out of range for a domain of size {size}")]
    OutOfRange { element: usize, size: usize },
    #[error("relation is not symmetric: O({0},{1}) without O({1},{0})")]
    NotSymmetric(usize, usize),
    #[error("relation is not irreflexive: O({0},{0})")]
    Reflexive(usize),
}

/// What had to be repaired when loading a relation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Normalization {
    pub added_symmetric: Vec<(usize, usize)>,
    pub removed_reflexive: Vec<usize>,
}

impl Normalization {
    pub fn is_clean(&self) -> bool {
        self.added_symmetric.is_empty() && self.removed_reflexive.is_empty()
    }
}

impl FiniteStructure {
    /// Structure with the given pairs; the pairs must already form a
    /// symmetric irreflexive relation.
    pub fn new(size: usize, pairs: &[(usize, usize)]) -> Result<Self, StructureError> {
        let mut m = FiniteStructure::empty(size);
        for &(i, j) in pairs {
            m.check(i)?;
            m.check(j)?;
            if i == j {
                return Err(StructureError::Reflexive(i));
            }
            m.adjacency[i * size + j] = true;
        }
        for i in 0..size {
            for j in 0..size {
                if m.perp(i, j) && !m.perp(j, i) {
                    return Err(StructureError::NotSymmetric(i, j));
                }
            }
        }
        Ok(m)
    }

    /// Structure from arbitrary pairs, symmetrizing and dropping loops.
    pub fn normalized(
        size: usize,
        pairs: &[(usize, usize)],
    ) -> Result<(Self, Normalization), StructureError> {
        let mut m = FiniteStructure::empty(size);
        let given: HashSet<(usize, usize)> = pairs.iter().copied().collect();
        let mut fix = Normalization::default();
        for &(i, j) in pairs {
            m.check(i)?;
            m.check(j)?;
            if i == j {
                if !fix.removed_reflexive.contains(&i) {
                    fix.removed_reflexive.push(i);
                }
                continue;
            }
            if !given.contains(&(j, i)) && !fix.added_symmetric.contains(&(j, i)) {
                fix.added_symmetric.push((j, i));
            }
            m.set(i, j);
        }
        Ok((m, fix))
    }

    pub fn empty(size: usize) -> Self {
        FiniteStructure {
            size,
            adjacency: vec![false; size * size],
            lines: None,
        }
    }

    fn check(&self, element: usize) -> Result<(), StructureError> {
        if element < self.size {
            Ok(())
        } else {
            Err(StructureError::OutOfRange {
                element,
                size: self.size,
            })
        }
    }

    fn set(&mut self, i: usize, j: usize) {
        self.adjacency[i * self.size + j] = true;
        self.adjacency[j * self.size + i] = true;
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn perp(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.size + j]
    }

    /// Pairs `(i, j)` with `i < j` and `O(i, j)`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|i| (i + 1..self.size).map(move |j| (i, j)))
            .filter(|&(i, j)| self.perp(i, j))
            .collect()
    }

    pub fn lines(&self) -> Option<&[Line]> {
        self.lines.as_deref()
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&j| self.perp(i, j))
    }

    /// Copy without the source lines.
    pub fn forget_lines(&self) -> FiniteStructure {
        FiniteStructure {
            lines: None,
            ..self.clone()
        }
    }
}

/// The structure whose elements are `lines`, related by perpendicularity.
pub fn to_structure(lines: &[Line]) -> Result<FiniteStructure, StructureError> {
    let mut seen: BTreeMap<&Line, usize> = BTreeMap::new();
    for (i, l) in lines.iter().enumerate() {
        if let Some(&first) = seen.get(l) {
            return Err(StructureError::DuplicateLine {
                line: l.clone(),
                first,
                second: i,
            });
        }
        seen.insert(l, i);
    }
    let mut m = FiniteStructure::empty(lines.len());
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if perp(&lines[i], &lines[j]) {
                m.set(i, j);
            }
        }
    }
    m.lines = Some(lines.to_vec());
    Ok(m)
}

/// Assignment of structure elements to free variables.
pub type Valuation = BTreeMap<Term, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not bound")]
    Unbound(Term),
    #[error("valuation maps `{term}` to {element}, outside a domain of size {size}")]
    OutOfRange {
        term: Term,
        element: usize,
        size: usize,
    },
}

/// Tarskian truth of `f` in `m` under `v`; quantifiers range over the whole
/// finite domain.
pub fn eval_finite(f: &Formula, m: &FiniteStructure, v: &Valuation) -> Result<bool, EvalError> {
    for (t, &e) in v {
        if e >= m.size {
            return Err(EvalError::OutOfRange {
                term: t.clone(),
                element: e,
                size: m.size,
            });
        }
    }
    let mut scope: Vec<(Term, usize)> = v.iter().map(|(t, &e)| (t.clone(), e)).collect();
    // Resolve every variable up front so evaluation never fails midway.
    check_bound(f, &mut scope.iter().map(|(t, _)| t.clone()).collect())?;
    Ok(eval(f, m, &mut scope))
}

fn check_bound(f: &Formula, scope: &mut Vec<Term>) -> Result<(), EvalError> {
    let need = |t: &Term, scope: &Vec<Term>| {
        if scope.contains(t) {
            Ok(())
        } else {
            Err(EvalError::Unbound(t.clone()))
        }
    };
    match f {
        Formula::Perp(a, b) | Formula::Eq(a, b) => {
            need(a, scope)?;
            need(b, scope)
        }
        Formula::Not(g) => check_bound(g, scope),
        Formula::And(a, b) => {
            check_bound(a, scope)?;
            check_bound(b, scope)
        }
        Formula::Exists(x, g) => {
            scope.push(x.clone());
            let r = check_bound(g, scope);
            scope.pop();
            r
        }
    }
}

fn lookup(scope: &[(Term, usize)], t: &Term) -> usize {
    scope
        .iter()
        .rev()
        .find(|(s, _)| s == t)
        .map(|(_, e)| *e)
        .expect("bound variables were checked")
}

fn eval(f: &Formula, m: &FiniteStructure, scope: &mut Vec<(Term, usize)>) -> bool {
    match f {
        Formula::Perp(a, b) => m.perp(lookup(scope, a), lookup(scope, b)),
        Formula::Eq(a, b) => lookup(scope, a) == lookup(scope, b),
        Formula::Not(g) => !eval(g, m, scope),
        Formula::And(a, b) => eval(a, m, scope) && eval(b, m, scope),
        Formula::Exists(x, g) => {
            scope.push((x.clone(), 0));
            let last = scope.len() - 1;
            let mut verdict = false;
            for e in 0..m.size {
                scope[last].1 = e;
                if eval(g, m, scope) {
                    verdict = true;
                    break;
                }
            }
            scope.pop();
            verdict
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum R1Error {
    /// `x R1 y` holds but `y R1 x` fails, witnessed by `z` with `O(y,z)` and
    /// not `O(x,z)`.
    #[error("R1 is not symmetric on this domain: {x} R1 {y} but not conversely (witness {z})")]
    NotSymmetric { x: usize, y: usize, z: usize },
    #[error("R1 is not transitive on this domain: {x} R1 {y} R1 {z} but not {x} R1 {z}")]
    NotTransitive { x: usize, y: usize, z: usize },
    #[error("class {class} is perpendicular to classes {first} and {second}")]
    NotAPairing {
        class: usize,
        first: usize,
        second: usize,
    },
}

/// `x R1 y` iff every `z` perpendicular to `x` is perpendicular to `y`.
pub fn r1_relation(m: &FiniteStructure) -> Vec<Vec<bool>> {
    (0..m.size)
        .map(|x| {
            (0..m.size)
                .map(|y| (0..m.size).all(|z| !m.perp(x, z) || m.perp(y, z)))
                .collect()
        })
        .collect()
}

/// Partition of the domain into R1 classes, each sorted, ordered by least
/// member. Fails with a witness when R1 is not an equivalence on `m`.
#[allow(clippy::needless_range_loop)]
pub fn r1_classes(m: &FiniteStructure) -> Result<Vec<Vec<usize>>, R1Error> {
    let r = r1_relation(m);
    let n = m.size;
    for x in 0..n {
        for y in 0..n {
            if r[x][y] && !r[y][x] {
                let z = (0..n)
                    .find(|&z| m.perp(y, z) && !m.perp(x, z))
                    .expect("asymmetry has a witness");
                return Err(R1Error::NotSymmetric { x, y, z });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if !r[x][y] {
                continue;
            }
            if let Some(z) = (0..n).find(|&z| r[y][z] && !r[x][z]) {
                return Err(R1Error::NotTransitive { x, y, z });
            }
        }
    }
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x].is_some() {
            continue;
        }
        let members: Vec<usize> = (x..n).filter(|&y| r[x][y]).collect();
        for &y in &members {
            class_of[y] = Some(classes.len());
        }
        classes.push(members);
    }
    Ok(classes)
}

/// For each R1 class, the class it is perpendicular to (if any).
pub fn r2_pairs(m: &FiniteStructure) -> Result<Vec<Option<usize>>, R1Error> {
    let classes = r1_classes(m)?;
    let mut partner: Vec<Option<usize>> = vec![None; classes.len()];
    for (c, members) in classes.iter().enumerate() {
        let rep = members[0];
        for (d, other) in classes.iter().enumerate() {
            if m.perp(rep, other[0]) {
                if let Some(first) = partner[c] {
                    return Err(R1Error::NotAPairing {
                        class: c,
                        first,
                        second: d,
                    });
                }
                partner[c] = Some(d);
            }
        }
    }
    Ok(partner)
}

/// Whether a partner map is an involution without fixed points on the
/// classes that have a partner.
pub fn is_fixed_point_free_involution(partner: &[Option<usize>]) -> bool {
    partner.iter().enumerate().all(|(c, p)| match p {
        None => true,
        Some(d) => *d != c && partner.get(*d).copied().flatten() == Some(c),
    })
}
