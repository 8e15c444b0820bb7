//! Immutable, structurally shared expression trees kept in a light canonical
//! form at construction time.
//!
//! Canonical form: sums are flattened, like terms collected and sorted;
//! products are flattened, numeric factors merged, repeated bases collected
//! into integer powers and all exponential factors merged into a single
//! `exp` of the summed arguments. `exp(0) = 1`, `x^0 = 1`, `0*x = 0`.
//! Square roots only ever appear to the first power: `sqrt(a)^2` folds to `a`.
//! Products of sums are *not* distributed here; see [`super::simplify`].

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops;
use std::sync::{Arc, OnceLock};

use super::coeff::Coeff;
use super::symbol::Symbol;

#[derive(Debug, PartialEq)]
pub enum Node {
    Num(Coeff),
    Sym(Symbol),
    /// Conjugate of a symbol that is not declared real.
    Conj(Expr),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, i64),
    Exp(Expr),
    Sqrt(Expr),
}

impl Node {
    fn rank(&self) -> u8 {
        match self {
            Node::Num(_) => 0,
            Node::Sym(_) => 1,
            Node::Conj(_) => 2,
            Node::Sqrt(_) => 3,
            Node::Exp(_) => 4,
            Node::Pow(..) => 5,
            Node::Mul(_) => 6,
            Node::Add(_) => 7,
        }
    }
}

#[derive(Debug)]
struct Inner {
    node: Node,
    hash: u64,
    mask: u64,
    size: u64,
}

/// Shared handle to an expression node.
#[derive(Clone)]
pub struct Expr(Arc<Inner>);

fn symbol_bit(sym: &Symbol) -> u64 {
    let mut h = DefaultHasher::new();
    sym.name().hash(&mut h);
    1u64 << (h.finish() % 64)
}

impl Expr {
    fn from_node(node: Node) -> Expr {
        let mut h = DefaultHasher::new();
        node.rank().hash(&mut h);
        let (mask, size) = match &node {
            Node::Num(c) => {
                c.hash(&mut h);
                (0, 1)
            }
            Node::Sym(s) => {
                s.hash(&mut h);
                (symbol_bit(s), 1)
            }
            Node::Conj(a) | Node::Exp(a) | Node::Sqrt(a) => {
                a.0.hash.hash(&mut h);
                (a.0.mask, a.0.size.saturating_add(1))
            }
            Node::Pow(b, n) => {
                b.0.hash.hash(&mut h);
                n.hash(&mut h);
                (b.0.mask, b.0.size.saturating_add(1))
            }
            Node::Add(xs) | Node::Mul(xs) => {
                let mut mask = 0;
                let mut size = 1u64;
                for x in xs {
                    x.0.hash.hash(&mut h);
                    mask |= x.0.mask;
                    size = size.saturating_add(x.0.size);
                }
                (mask, size)
            }
        };
        Expr(Arc::new(Inner { node, hash: h.finish(), mask, size }))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    /// Number of nodes when the shared structure is unfolded into a tree.
    pub fn tree_size(&self) -> u64 {
        self.0.size
    }

    pub(crate) fn ptr(&self) -> *const () {
        Arc::as_ptr(&self.0) as *const ()
    }

    /// Conservative dependency test: `false` guarantees independence of `sym`.
    pub fn may_depend_on(&self, sym: &Symbol) -> bool {
        self.0.mask & symbol_bit(sym) != 0
    }

    pub fn zero() -> Expr {
        static ZERO: OnceLock<Expr> = OnceLock::new();
        ZERO.get_or_init(|| Expr::from_node(Node::Num(Coeff::zero()))).clone()
    }

    pub fn one() -> Expr {
        static ONE: OnceLock<Expr> = OnceLock::new();
        ONE.get_or_init(|| Expr::from_node(Node::Num(Coeff::one()))).clone()
    }

    pub fn i() -> Expr {
        static I: OnceLock<Expr> = OnceLock::new();
        I.get_or_init(|| Expr::from_node(Node::Num(Coeff::i()))).clone()
    }

    pub fn num(c: Coeff) -> Expr {
        Expr::from_node(Node::Num(c))
    }

    pub fn int(n: i64) -> Expr {
        Expr::num(Coeff::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::num(Coeff::from_ratio(num, den))
    }

    pub fn sym(s: &Symbol) -> Expr {
        Expr::from_node(Node::Sym(s.clone()))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Num(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::Num(c) if c.is_one())
    }

    pub fn as_num(&self) -> Option<&Coeff> {
        match self.node() {
            Node::Num(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    /// Top-level summands (a non-sum is its own single term).
    pub fn terms(&self) -> Vec<Expr> {
        match self.node() {
            Node::Add(xs) => xs.clone(),
            _ => vec![self.clone()],
        }
    }

    pub fn pow(&self, n: i64) -> Expr {
        pow(self, n)
    }

    pub fn exp(&self) -> Expr {
        exp(self)
    }

    pub fn sqrt(&self) -> Expr {
        sqrt(self)
    }

    pub fn conj(&self) -> Expr {
        conj(self)
    }

    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        let mut seen = HashSet::new();
        collect_symbols(self, &mut out, &mut seen);
        out
    }

    /// Replace symbols by expressions, re-canonicalizing on the way up.
    pub fn subs(&self, map: &HashMap<Symbol, Expr>) -> Expr {
        let mut memo = HashMap::new();
        subs_rec(self, map, &mut memo)
    }

    pub fn subs_one(&self, sym: &Symbol, value: &Expr) -> Expr {
        let mut map = HashMap::new();
        map.insert(sym.clone(), value.clone());
        self.subs(&map)
    }
}

fn collect_symbols(e: &Expr, out: &mut BTreeSet<Symbol>, seen: &mut HashSet<*const ()>) {
    if e.0.mask == 0 || !seen.insert(e.ptr()) {
        return;
    }
    match e.node() {
        Node::Num(_) => {}
        Node::Sym(s) => {
            out.insert(s.clone());
        }
        Node::Conj(a) | Node::Exp(a) | Node::Sqrt(a) | Node::Pow(a, _) => collect_symbols(a, out, seen),
        Node::Add(xs) | Node::Mul(xs) => {
            for x in xs {
                collect_symbols(x, out, seen);
            }
        }
    }
}

fn subs_rec(e: &Expr, map: &HashMap<Symbol, Expr>, memo: &mut HashMap<*const (), Expr>) -> Expr {
    if e.0.mask == 0 {
        return e.clone();
    }
    if let Some(hit) = memo.get(&e.ptr()) {
        return hit.clone();
    }
    let out = match e.node() {
        Node::Num(_) => e.clone(),
        Node::Sym(s) => map.get(s).cloned().unwrap_or_else(|| e.clone()),
        Node::Conj(a) => conj(&subs_rec(a, map, memo)),
        Node::Exp(a) => exp(&subs_rec(a, map, memo)),
        Node::Sqrt(a) => sqrt(&subs_rec(a, map, memo)),
        Node::Pow(b, n) => pow(&subs_rec(b, map, memo), *n),
        Node::Add(xs) => add_all(xs.iter().map(|x| subs_rec(x, map, memo)).collect::<Vec<_>>()),
        Node::Mul(xs) => mul_all(xs.iter().map(|x| subs_rec(x, map, memo)).collect::<Vec<_>>()),
    };
    memo.insert(e.ptr(), out.clone());
    out
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.node == other.0.node)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order: node kind rank first, then recursive lexicographic comparison.
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (a, b) = (self.node(), other.node());
        a.rank().cmp(&b.rank()).then_with(|| match (a, b) {
            (Node::Num(x), Node::Num(y)) => x.cmp(y),
            (Node::Sym(x), Node::Sym(y)) => x.cmp(y),
            (Node::Conj(x), Node::Conj(y)) | (Node::Exp(x), Node::Exp(y)) | (Node::Sqrt(x), Node::Sqrt(y)) => x.cmp(y),
            (Node::Pow(x, n), Node::Pow(y, m)) => x.cmp(y).then(n.cmp(m)),
            (Node::Add(xs), Node::Add(ys)) | (Node::Mul(xs), Node::Mul(ys)) => xs.cmp(ys),
            _ => unreachable!("rank mismatch"),
        })
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

// ---------------------------------------------------------------------------
// Canonicalizing constructors
// ---------------------------------------------------------------------------

/// Split a term into its numeric coefficient and the remaining product.
pub(crate) fn split_coeff(e: &Expr) -> (Coeff, Expr) {
    match e.node() {
        Node::Num(c) => (c.clone(), Expr::one()),
        Node::Mul(fs) => match fs[0].node() {
            Node::Num(c) => {
                let rest = if fs.len() == 2 { fs[1].clone() } else { Expr::from_node(Node::Mul(fs[1..].to_vec())) };
                (c.clone(), rest)
            }
            _ => (Coeff::one(), e.clone()),
        },
        _ => (Coeff::one(), e.clone()),
    }
}

/// `c * rest` where `rest` is already a canonical coefficient-free term.
fn scale_term(c: &Coeff, rest: &Expr) -> Expr {
    if c.is_one() {
        return rest.clone();
    }
    if rest.is_one() {
        return Expr::num(c.clone());
    }
    let mut fs = vec![Expr::num(c.clone())];
    match rest.node() {
        Node::Mul(xs) => fs.extend(xs.iter().cloned()),
        _ => fs.push(rest.clone()),
    }
    Expr::from_node(Node::Mul(fs))
}

pub fn add_all<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
    let mut constant = Coeff::zero();
    let mut collected: HashMap<Expr, Coeff> = HashMap::new();
    let mut stack: Vec<Expr> = terms.into_iter().collect();
    while let Some(t) = stack.pop() {
        match t.node() {
            Node::Num(c) => constant = constant.add(c),
            Node::Add(xs) => stack.extend(xs.iter().cloned()),
            _ => {
                let (c, rest) = split_coeff(&t);
                collected.entry(rest).and_modify(|acc| *acc = acc.add(&c)).or_insert(c);
            }
        }
    }
    let mut out: Vec<Expr> =
        collected.into_iter().filter(|(_, c)| !c.is_zero()).map(|(rest, c)| scale_term(&c, &rest)).collect();
    if !constant.is_zero() {
        out.push(Expr::num(constant));
    }
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => {
            out.sort();
            Expr::from_node(Node::Add(out))
        }
    }
}

pub fn mul_all<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
    let mut coeff = Coeff::one();
    let mut exp_args: Vec<Expr> = Vec::new();
    let mut powers: HashMap<Expr, i64> = HashMap::new();
    let mut queue: Vec<Expr> = factors.into_iter().collect();
    loop {
        while let Some(f) = queue.pop() {
            match f.node() {
                Node::Num(c) => {
                    coeff = coeff.mul(c);
                    if coeff.is_zero() {
                        return Expr::zero();
                    }
                }
                Node::Mul(fs) => queue.extend(fs.iter().cloned()),
                Node::Exp(a) => exp_args.push(a.clone()),
                Node::Pow(b, n) => *powers.entry(b.clone()).or_insert(0) += *n,
                _ => *powers.entry(f.clone()).or_insert(0) += 1,
            }
        }
        // sqrt(a)^n with n outside {0, 1} folds into a^(n div 2) * sqrt(a)^(n mod 2)
        let mut reduced = false;
        for (base, n) in powers.iter_mut() {
            if let Node::Sqrt(a) = base.node() {
                if *n != 0 && *n != 1 {
                    queue.push(pow(a, n.div_euclid(2)));
                    *n = n.rem_euclid(2);
                    reduced = true;
                }
            }
        }
        if !reduced {
            break;
        }
    }

    let mut out: Vec<Expr> = Vec::with_capacity(powers.len() + 1);
    if !exp_args.is_empty() {
        let arg = add_all(exp_args);
        if !arg.is_zero() {
            out.push(Expr::from_node(Node::Exp(arg)));
        }
    }
    for (base, n) in powers {
        match n {
            0 => {}
            1 => out.push(base),
            _ => out.push(Expr::from_node(Node::Pow(base, n))),
        }
    }
    out.sort();
    match out.len() {
        0 => Expr::num(coeff),
        1 if coeff.is_one() => out.pop().unwrap(),
        1 if matches!(out[0].node(), Node::Add(_)) => {
            // numeric factors distribute over a lone sum
            let terms: Vec<Expr> = out[0]
                .terms()
                .iter()
                .map(|t| {
                    let (c, rest) = split_coeff(t);
                    scale_term(&c.mul(&coeff), &rest)
                })
                .collect();
            add_all(terms)
        }
        _ => {
            if !coeff.is_one() {
                out.insert(0, Expr::num(coeff));
            }
            Expr::from_node(Node::Mul(out))
        }
    }
}

pub fn add(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    add_all([a.clone(), b.clone()])
}

pub fn mul(a: &Expr, b: &Expr) -> Expr {
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    mul_all([a.clone(), b.clone()])
}

pub fn neg(a: &Expr) -> Expr {
    mul(&Expr::int(-1), a)
}

pub fn sub(a: &Expr, b: &Expr) -> Expr {
    add(a, &neg(b))
}

pub fn div(a: &Expr, b: &Expr) -> Expr {
    mul(a, &pow(b, -1))
}

pub fn pow(base: &Expr, n: i64) -> Expr {
    if n == 0 {
        return Expr::one();
    }
    if n == 1 {
        return base.clone();
    }
    match base.node() {
        Node::Num(c) => match c.powi(n) {
            Some(v) => Expr::num(v),
            None => Expr::from_node(Node::Pow(base.clone(), n)),
        },
        Node::Mul(fs) => mul_all(fs.iter().map(|f| pow(f, n)).collect::<Vec<_>>()),
        Node::Pow(b, m) => pow(b, m.checked_mul(n).expect("exponent overflow")),
        Node::Exp(a) => exp(&mul(&Expr::int(n), a)),
        Node::Sqrt(a) => {
            let whole = pow(a, n.div_euclid(2));
            if n.rem_euclid(2) == 1 {
                mul(&whole, base)
            } else {
                whole
            }
        }
        _ => Expr::from_node(Node::Pow(base.clone(), n)),
    }
}

pub fn exp(arg: &Expr) -> Expr {
    if arg.is_zero() {
        return Expr::one();
    }
    Expr::from_node(Node::Exp(arg.clone()))
}

/// Principal square root.
pub fn sqrt(arg: &Expr) -> Expr {
    if let Node::Num(c) = arg.node() {
        if let Some(root) = c.exact_sqrt() {
            return Expr::num(root);
        }
    }
    Expr::from_node(Node::Sqrt(arg.clone()))
}

/// Complex conjugation pushed to the leaves. Declared-real symbols are fixed
/// points; `conj(exp z) = exp(conj z)`; `conj(sqrt z) = sqrt(conj z)` holds off
/// the negative real axis.
pub fn conj(e: &Expr) -> Expr {
    if e.0.mask == 0 {
        if let Node::Num(c) = e.node() {
            if c.is_real() {
                return e.clone();
            }
        }
    }
    match e.node() {
        Node::Num(c) => Expr::num(c.conj()),
        Node::Sym(s) => {
            if s.is_real() {
                e.clone()
            } else {
                Expr::from_node(Node::Conj(e.clone()))
            }
        }
        Node::Conj(inner) => inner.clone(),
        Node::Add(xs) => add_all(xs.iter().map(conj).collect::<Vec<_>>()),
        Node::Mul(xs) => mul_all(xs.iter().map(conj).collect::<Vec<_>>()),
        Node::Pow(b, n) => pow(&conj(b), *n),
        Node::Exp(a) => exp(&conj(a)),
        Node::Sqrt(a) => sqrt(&conj(a)),
    }
}

pub fn sum_of<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
    add_all(terms)
}

pub fn product_of<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
    mul_all(factors)
}

// ---------------------------------------------------------------------------
// Operator sugar
// ---------------------------------------------------------------------------

macro_rules! binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $f(&self, &rhs)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $f(&self, rhs)
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $f(self, &rhs)
            }
        }
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $f(self, rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        neg(&self)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        neg(self)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Expr {
        Expr::sym(s)
    }
}
