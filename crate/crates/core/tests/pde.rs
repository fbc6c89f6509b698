use conformal_bounds::exactfn::RationalFn;
use conformal_bounds::pde::*;
use conformal_bounds::profile::KernelProfile;

fn spec(nodes: usize) -> GridSpec {
    GridSpec::square(nodes)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn v_at_axis_point_lies_between_closed_forms() {
    let f = solve_profile(ProfileTag::V, 9, spec(257)).unwrap();
    let (_, _, v) = f.interpolate(0.0, 1.0).map(|v| (0, 0, v)).unwrap();
    assert!((1.0 / 36864.0..=1.0 / 18432.0).contains(&v), "{v}");
    let (i, j, w) = f.nearest(0.0, 1.0);
    assert_eq!(i, 0);
    assert!((f.grid().s()[j] - 1.0).abs() < 0.1);
    assert!(w > 0.0);
}

#[test]
fn fields_are_nonnegative_finite_and_zero_on_bottom_row() {
    for tag in ProfileTag::ALL {
        let f = solve_profile(tag, 8, spec(65)).unwrap();
        assert!(f.is_finite());
        assert!(f.values().iter().all(|v| *v >= 0.0), "{tag}");
        assert!((0..f.grid().n_r()).all(|i| f.value(i, 0) == 0.0), "{tag}");
        assert!(f.stats().relative_residual <= RESIDUAL_TOLERANCE);
    }
}

#[test]
fn residual_matches_source() {
    let p = Problem::tagged(ProfileTag::Lambda, 7, FarField::Subsolution).unwrap();
    let f = solve(&p, spec(129)).unwrap();
    let g = f.grid();
    let st = Stencil::new(g, 7);
    let src = p.source_values(g).unwrap();
    let scale = src.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (_, worst) = st.residual(f.values(), &src, g.n_r());
    assert!(worst <= 1e-10 * scale, "{worst}");
}

#[test]
fn monotone_and_linear_in_source() {
    let n = 9;
    let v = ProfileTag::V.source();
    let l = ProfileTag::Lambda.source();
    let zero = vec![];
    let solve_src = |src: Vec<KernelProfile>| solve(&Problem::custom("src", n, src, zero.clone()), spec(65)).unwrap();
    let full = solve_src(vec![v.clone()]);
    let half = solve_src(vec![v.scale(&RationalFn::ratio(1, 2))]);
    assert!(full.values().iter().zip(half.values()).all(|(a, b)| a >= b));
    let lam = solve_src(vec![l.clone()]);
    let both = solve_src(vec![v, l]);
    let sum: Vec<f64> = full.values().iter().zip(lam.values()).map(|(a, b)| a + b).collect();
    let scale = both.values().iter().fold(0.0f64, |m, x| m.max(*x));
    assert!(max_abs_diff(&sum, both.values()) <= 1e-10 * scale);
}

#[test]
fn v_minus_subsolution_is_u1() {
    let n = 9;
    let mut errs = Vec::new();
    for nodes in [65, 129] {
        let v = solve_profile(ProfileTag::V, n, spec(nodes)).unwrap();
        let u1 = solve_profile(ProfileTag::U1, n, spec(nodes)).unwrap();
        let sub = ProfileTag::V.subsolution().unwrap().at(n).unwrap();
        let g = v.grid();
        let mut worst = 0.0f64;
        for (i, &r) in g.r().iter().enumerate() {
            for (j, &s) in g.s().iter().enumerate() {
                let d = if j == 0 { 0.0 } else { v.value(i, j) - sub.eval(r, s) };
                worst = worst.max((d - u1.value(i, j)).abs());
            }
        }
        errs.push(worst);
    }
    let peak = 2.7e-4;
    assert!(errs[1] < 1e-2 * peak, "{errs:?}");
    assert!(errs[1] < errs[0] / 3.0, "{errs:?}");
}

#[test]
fn sandwich_passes_and_detects_bottom_perturbation() {
    let f = solve_profile(ProfileTag::V, 9, spec(257)).unwrap();
    let rep = sandwich_check(&f, 1e-4).unwrap();
    assert!(rep.pass);
    assert!(rep.upper_bound.is_some());
    let mut vals = f.values().to_vec();
    vals[f.grid().idx(40, 0)] = 1.0;
    let bad = sandwich_check(&f.with_values(vals), 1e-4).unwrap();
    assert!(!bad.pass);
    assert_eq!((bad.upper.i, bad.upper.j, bad.upper.s), (40, 0, 0.0));
}

#[test]
fn lower_bounds_hold_for_lambda_and_v1() {
    let lam = solve_profile(ProfileTag::Lambda, 7, spec(257)).unwrap();
    assert!(sandwich_check(&lam, 1e-6).unwrap().lower.value <= 1e-6);
    let v1 = solve_profile(ProfileTag::V1, 9, spec(257)).unwrap();
    let rep = sandwich_check(&v1, 1e-6).unwrap();
    assert!(rep.pass);
    assert!(rep.upper_bound.is_none());
}

#[test]
fn custom_problem_has_no_bounds() {
    let src = vec![ProfileTag::V.source()];
    let f = solve(&Problem::custom("c", 9, src, vec![]), spec(33)).unwrap();
    assert!(matches!(sandwich_check(&f, 1.0), Err(PdeError::NoBounds(_))));
}

#[test]
fn second_order_convergence() {
    for (tag, n) in [(ProfileTag::V, 9), (ProfileTag::Lambda, 7)] {
        let p = Problem::tagged(tag, n, FarField::Subsolution).unwrap();
        let st = convergence_study(&p, &[spec(65), spec(129), spec(257)]).unwrap();
        assert!((1.7..=2.3).contains(&st.report.order), "{tag}: {:?}", st.report);
        assert!(!st.report.inconclusive);
    }
}

#[test]
fn convergence_rejects_identical_or_short_sequences() {
    let p = Problem::tagged(ProfileTag::V, 9, FarField::Subsolution).unwrap();
    assert!(matches!(convergence_study(&p, &[spec(65); 3]), Err(PdeError::NotNested(_))));
    assert!(matches!(convergence_study(&p, &[spec(65), spec(129)]), Err(PdeError::NotNested(_))));
}

#[test]
fn supersolution_far_field_brackets() {
    let lo = solve(&Problem::tagged(ProfileTag::V, 9, FarField::Subsolution).unwrap(), spec(129)).unwrap();
    let hi = solve(&Problem::tagged(ProfileTag::V, 9, FarField::Supersolution).unwrap(), spec(129)).unwrap();
    assert!(lo.values().iter().zip(hi.values()).all(|(a, b)| a <= b));
    assert!(Problem::tagged(ProfileTag::Lambda, 7, FarField::Supersolution).is_err());
    assert!(matches!(Problem::tagged(ProfileTag::V, 5, FarField::Subsolution), Err(PdeError::Domain { .. })));
}

#[test]
fn binary_and_csv_round_trip() {
    let f = solve_profile(ProfileTag::U2, 7, spec(33)).unwrap();
    let mut buf = Vec::new();
    write_binary(&f, &mut buf).unwrap();
    let back = read_binary(buf.as_slice()).unwrap();
    assert_eq!(back.values, f.values());
    assert_eq!(back.r, f.grid().r());
    assert_eq!(back.header.tag, Some(ProfileTag::U2));
    assert_eq!(back.header.n, 7);
    assert!(read_binary(&buf[..buf.len() - 3]).is_err());
    assert!(read_binary(&b"NOTAFIELD"[..]).is_err());

    let mut csv = Vec::new();
    write_csv(&f, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("# label=u2 n=7"));
    assert_eq!(text.lines().count(), 2 + 33 * 33);
}
