use proptest::prelude::*;
use spfactor::sparsepoly::{make_monic, parse_poly_n, sparse_divide, x_names, ExpVec};
use spfactor::{make_field, Field, Result, SparsePoly};

type Terms = Vec<(Vec<u32>, u32)>;

fn terms(n: usize, d: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=d, n), 1u32..1000), 0..=max_terms)
}

fn build(f: &Field, n: usize, t: &Terms) -> SparsePoly {
    let list: Vec<_> = t.iter().map(|(e, c)| (ExpVec::new(e), f.nth(c % f.size()))).collect();
    SparsePoly::from_terms(f, n, list)
}

fn field_for(i: usize) -> Field {
    [make_field(7, 1), make_field(2, 3), make_field(13, 1)][i % 3].clone().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(fi in 0usize..3, a in terms(3, 2, 5), b in terms(3, 2, 5), c in terms(3, 2, 5)) {
        let f = field_for(fi);
        let (a, b, c) = (build(&f, 3, &a), build(&f, 3, &b), build(&f, 3, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a * &b).sparsity() <= a.sparsity() * b.sparsity());
    }

    #[test]
    fn leading_coefficients_multiply(fi in 0usize..3, a in terms(3, 2, 5), b in terms(3, 2, 5), i in 0usize..3) {
        let f = field_for(fi);
        let (a, b) = (build(&f, 3, &a), build(&f, 3, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (la, da) = a.lead_and_degree(i).unwrap();
        let (lb, db) = b.lead_and_degree(i).unwrap();
        let (lab, dab) = (&a * &b).lead_and_degree(i).unwrap();
        prop_assert_eq!(lab, &la * &lb);
        prop_assert_eq!(dab, da + db);
    }

    #[test]
    fn line_restriction_is_multiplicative(
        a in terms(3, 2, 4), b in terms(3, 2, 4),
        pa in prop::collection::vec(0u32..7, 2), pb in prop::collection::vec(0u32..7, 2),
    ) {
        let f = make_field(7, 1).unwrap();
        let (a, b) = (build(&f, 3, &a), build(&f, 3, &b));
        let pa: Vec<_> = pa.iter().map(|&c| f.nth(c)).collect();
        let pb: Vec<_> = pb.iter().map(|&c| f.nth(c)).collect();
        let lhs = (&a * &b).restrict_to_line(&pa, &pb).unwrap();
        let rhs = &a.restrict_to_line(&pa, &pb).unwrap() * &b.restrict_to_line(&pa, &pb).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_recovers_cofactor(fi in 0usize..3, a in terms(3, 2, 5), b in terms(3, 2, 4)) {
        let f = field_for(fi);
        let (a, b) = (build(&f, 3, &a), build(&f, 3, &b));
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(sparse_divide(&prod, &b, a.sparsity().max(1)).unwrap(), a.clone());
        for i in 0..3 {
            if !prod.is_zero() {
                prop_assert!(b.degree_in(i) <= prod.degree_in(i));
            }
        }
    }

    #[test]
    fn division_rejects_non_divisors(a in terms(2, 2, 4)) {
        let f = make_field(7, 1).unwrap();
        let a = build(&f, 2, &a);
        let g = parse_poly_n(&f, "x1^2 + x2 + 3", 2).unwrap();
        prop_assume!(!a.is_zero());
        let shifted = &(&a * &g) + &SparsePoly::one(&f, 2);
        prop_assert!(sparse_divide(&shifted, &g, 100).is_err());
    }

    #[test]
    fn make_monic_bounds_and_identity(fi in 0usize..3, a in terms(3, 3, 8), var in 0usize..3) {
        let f = field_for(fi);
        let a = build(&f, 3, &a);
        prop_assume!(!a.is_zero() && a.degree_in(var) > 0);
        let s = a.sparsity() as u64;
        let d = a.individual_degree();
        let t = make_monic(&a, var).unwrap();
        prop_assert!(t.fhat.is_monic_in(0));
        prop_assert!(t.fhat.sparsity() as u64 <= s.pow(d));
        prop_assert!(t.fhat.individual_degree() <= d * d);
        prop_assert_eq!(t.substitute_back(&t.fhat), &t.lead.pow(t.degree - 1) * &a);
    }

    #[test]
    fn print_parse_round_trip(fi in 0usize..3, a in terms(4, 3, 6)) {
        let f = field_for(fi);
        let a = build(&f, 4, &a);
        let text = a.fmt_with(&x_names(4));
        prop_assert_eq!(parse_poly_n(&f, &text, 4).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in terms(3, 2, 5), b in terms(3, 2, 5), pt in prop::collection::vec(0u32..13, 3)) {
        let f = make_field(13, 1).unwrap();
        let (a, b) = (build(&f, 3, &a), build(&f, 3, &b));
        let pt: Vec<_> = pt.iter().map(|&c| f.nth(c)).collect();
        let ev = |p: &SparsePoly| -> Result<_> { p.evaluate(&pt) };
        prop_assert_eq!(ev(&(&a * &b)).unwrap(), f.mul(ev(&a).unwrap(), ev(&b).unwrap()));
        prop_assert_eq!(ev(&(&a + &b)).unwrap(), f.add(ev(&a).unwrap(), ev(&b).unwrap()));
    }
}

#[test]
fn term_order_is_graded_lex() {
    let f = make_field(5, 1).unwrap();
    let p = parse_poly_n(&f, "x2 + x1 + x1*x2 + x2^2 + 1", 2).unwrap();
    assert_eq!(p.to_string(), "x1*x2 + x2^2 + x1 + x2 + 1");
}
