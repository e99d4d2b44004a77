//! ML erasure decoding verdicts. Payload values never matter: decoding fails
//! exactly when the received columns, mapped through the outer generator,
//! leave a nonzero message invisible.

use std::collections::VecDeque;

use super::{LTColumn, RaptorInstance};
use crate::galois::{FieldElement, FieldSpec};
use crate::outercodes::gf2::{pack_columns, BitVector, Gf2Basis};
use crate::outercodes::{GfqBasis, LinearCode, Matrix};

enum Images {
    Binary(Vec<BitVector>),
    General(Matrix),
}

/// Rank test of G_o·G_LT against k, prepared once per outer code.
pub struct FailureChecker {
    field: FieldSpec,
    k: usize,
    images: Images,
}

impl FailureChecker {
    pub fn new(outer: &LinearCode) -> Self {
        let g = outer.generator();
        let images = if outer.field().q() == 2 {
            Images::Binary(pack_columns(g))
        } else {
            Images::General(g.clone())
        };
        FailureChecker {
            field: outer.field().clone(),
            k: outer.k(),
            images,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// G_o·col as a dense vector of length k.
    pub fn image(&self, col: &LTColumn) -> Vec<FieldElement> {
        let f = &self.field;
        let mut v = vec![FieldElement::ZERO; self.k];
        match &self.images {
            Images::Binary(cols) => {
                for &(i, _) in &col.entries {
                    for (r, x) in v.iter_mut().enumerate() {
                        if cols[i].get(r) {
                            x.0 ^= 1;
                        }
                    }
                }
            }
            Images::General(g) => {
                for &(i, c) in &col.entries {
                    for (r, x) in v.iter_mut().enumerate() {
                        *x = f.add(*x, f.mul(c, g.get(r, i)));
                    }
                }
            }
        }
        v
    }

    pub fn fails(&self, columns: &[LTColumn]) -> bool {
        if self.k == 0 {
            return false;
        }
        if columns.len() < self.k {
            return true;
        }
        match &self.images {
            Images::Binary(cols) => {
                let mut basis = Gf2Basis::new(self.k);
                for col in columns {
                    let mut v = BitVector::zeros(self.k);
                    for &(i, _) in &col.entries {
                        v.xor_assign(&cols[i]);
                    }
                    basis.insert(v);
                    if basis.is_full() {
                        return false;
                    }
                }
                true
            }
            Images::General(_) => {
                let mut basis = GfqBasis::new(&self.field, self.k);
                for col in columns {
                    basis.insert(self.image(col));
                    if basis.is_full() {
                        return false;
                    }
                }
                true
            }
        }
    }
}

/// Failure iff rank(G_o · G_LT) < k.
pub fn ml_failure(instance: &RaptorInstance, columns: &[LTColumn]) -> bool {
    FailureChecker::new(instance.outer()).fails(columns)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InactivationReport {
    pub failure: bool,
    pub inactivated: usize,
}

#[derive(Clone, Copy)]
enum VarState {
    Unknown,
    Pivoted(usize),
    Inactive(usize),
}

/// Inactivation decoding of the intermediate symbols: the unknowns are the h
/// outer-codeword symbols, the equations are the received LT columns plus
/// the outer parity checks. Peeling runs on degree-1 equations; on a stall the
/// unresolved variable of largest residual degree is inactivated (lowest index
/// on ties), and a dense elimination over the inactive variables settles the
/// verdict.
pub fn inactivation_decode(instance: &RaptorInstance, columns: &[LTColumn]) -> InactivationReport {
    let field = instance.outer().field();
    let h = instance.h();
    let parity = instance.outer().parity_check();

    let mut equations: Vec<Vec<(usize, FieldElement)>> = columns.iter().map(|c| c.entries.clone()).collect();
    for r in 0..parity.rows() {
        let row: Vec<(usize, FieldElement)> =
            parity.row(r).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, &x)| (i, x)).collect();
        equations.push(row);
    }

    let mut var_eqs: Vec<Vec<usize>> = vec![Vec::new(); h];
    for (e, eq) in equations.iter().enumerate() {
        for &(v, _) in eq {
            var_eqs[v].push(e);
        }
    }
    let mut degree: Vec<usize> = equations.iter().map(|e| e.len()).collect();
    let mut used = vec![false; equations.len()];
    let mut state = vec![VarState::Unknown; h];
    let mut pivots: Vec<usize> = Vec::new();
    let mut inactive = 0usize;
    let mut unresolved = h;
    let mut queue: VecDeque<usize> = (0..equations.len()).filter(|&e| degree[e] == 1).collect();

    let release = |v: usize, used: &[bool], degree: &mut [usize], queue: &mut VecDeque<usize>| {
        for &e in &var_eqs[v] {
            if !used[e] {
                degree[e] -= 1;
                if degree[e] == 1 {
                    queue.push_back(e);
                }
            }
        }
    };

    while unresolved > 0 {
        while let Some(e) = queue.pop_front() {
            if used[e] || degree[e] != 1 {
                continue;
            }
            let v = equations[e]
                .iter()
                .map(|&(v, _)| v)
                .find(|&v| matches!(state[v], VarState::Unknown))
                .expect("degree-1 equation has one unknown");
            used[e] = true;
            state[v] = VarState::Pivoted(e);
            pivots.push(v);
            unresolved -= 1;
            release(v, &used, &mut degree, &mut queue);
        }
        if unresolved == 0 {
            break;
        }
        let mut best: Option<(usize, usize)> = None;
        for v in 0..h {
            if matches!(state[v], VarState::Unknown) {
                let d = var_eqs[v].iter().filter(|&&e| !used[e]).count();
                if best.map_or(true, |(_, bd)| d > bd) {
                    best = Some((v, d));
                }
            }
        }
        let (v, _) = best.expect("an unknown variable remains");
        state[v] = VarState::Inactive(inactive);
        inactive += 1;
        unresolved -= 1;
        release(v, &used, &mut degree, &mut queue);
    }

    // Every pivoted variable as a combination of the inactive ones.
    let mut expr: Vec<Vec<FieldElement>> = vec![Vec::new(); h];
    for v in 0..h {
        if let VarState::Inactive(i) = state[v] {
            let mut unit = vec![FieldElement::ZERO; inactive];
            unit[i] = FieldElement::ONE;
            expr[v] = unit;
        }
    }
    for &v in &pivots {
        let VarState::Pivoted(e) = state[v] else { unreachable!() };
        let mut acc = vec![FieldElement::ZERO; inactive];
        let mut cv = FieldElement::ONE;
        for &(u, c) in &equations[e] {
            if u == v {
                cv = c;
                continue;
            }
            for (a, x) in acc.iter_mut().zip(&expr[u]) {
                *a = field.add(*a, field.mul(c, *x));
            }
        }
        let scale = field.neg(field.inv_nonzero(cv));
        expr[v] = acc.into_iter().map(|a| field.mul(scale, a)).collect();
    }

    let mut basis = GfqBasis::new(field, inactive);
    for (e, eq) in equations.iter().enumerate() {
        if used[e] || basis.is_full() {
            continue;
        }
        let mut row = vec![FieldElement::ZERO; inactive];
        for &(u, c) in eq {
            for (a, x) in row.iter_mut().zip(&expr[u]) {
                *a = field.add(*a, field.mul(c, *x));
            }
        }
        basis.insert(row);
    }
    InactivationReport {
        failure: !basis.is_full(),
        inactivated: inactive,
    }
}

/// Same verdict as [`ml_failure`], reached by inactivation decoding.
pub fn inactivation_solve(instance: &RaptorInstance, columns: &[LTColumn]) -> bool {
    inactivation_decode(instance, columns).failure
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::DegreeDistribution;
    use crate::raptor::Construction;

    fn identity_instance(k: usize) -> RaptorInstance {
        let f = FieldSpec::of_order(2).unwrap();
        let code = LinearCode::from_generator(Matrix::identity(&f, k)).unwrap();
        RaptorInstance::new(code, Construction::gfq(&f, DegreeDistribution::from_ratios(&[(1, 1, 1)]).unwrap())).unwrap()
    }

    fn col(entries: &[usize]) -> LTColumn {
        LTColumn {
            entries: entries.iter().map(|&i| (i, FieldElement::ONE)).collect(),
        }
    }

    #[test]
    fn pure_peeling() {
        let inst = identity_instance(3);
        let cols = [col(&[2]), col(&[0]), col(&[1])];
        assert!(!ml_failure(&inst, &cols));
        assert_eq!(inactivation_decode(&inst, &cols), InactivationReport { failure: false, inactivated: 0 });
        assert!(ml_failure(&inst, &cols[..2]));
        assert!(inactivation_solve(&inst, &cols[..2]));
    }

    #[test]
    fn degree_two_cycle() {
        let inst = identity_instance(4);
        // a 4-cycle of degree-2 columns spans only the even-weight words
        let cycle = [col(&[0, 1]), col(&[1, 2]), col(&[2, 3]), col(&[3, 0])];
        assert!(ml_failure(&inst, &cycle));
        let report = inactivation_decode(&inst, &cycle);
        assert!(report.failure && report.inactivated > 0);
        let mut closed = cycle.to_vec();
        closed.push(col(&[1, 2, 3]));
        assert!(!ml_failure(&inst, &closed));
        assert!(!inactivation_solve(&inst, &closed));
    }
}
