use std::f64::consts::PI;

use volfit::quad::QuadratureConfig;
use volfit::specfun::{
    beta_fn, ln_gamma, ln_tricomi_u, reg_inc_beta, reg_inc_gamma_lower, reg_inc_gamma_upper, tricomi_u,
};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn gamma_and_beta_examples() {
    assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
    assert!(close(ln_gamma(0.5).unwrap(), 0.5 * PI.ln(), 1e-14));
    assert!(close(ln_gamma(10.0).unwrap(), 362_880f64.ln(), 1e-14));
    assert!(ln_gamma(0.0).is_err() && ln_gamma(-2.5).is_err());
    assert!(close(beta_fn(1.0, 1.0).unwrap(), 1.0, 1e-14));
    assert!(close(beta_fn(2.0, 3.0).unwrap(), 1.0 / 12.0, 1e-14));
    assert!(close(beta_fn(0.5, 0.5).unwrap(), PI, 1e-14));
    assert!(beta_fn(0.0, 1.0).is_err());
}

#[test]
fn incomplete_function_examples() {
    assert!(close(
        reg_inc_gamma_lower(1.0, 1.0).unwrap(),
        1.0 - (-1f64).exp(),
        1e-14
    ));
    assert_eq!(reg_inc_gamma_lower(3.3, 0.0).unwrap(), 0.0);
    assert!(close(
        reg_inc_gamma_lower(2.0, 2.0).unwrap(),
        1.0 - 3.0 * (-2f64).exp(),
        1e-14
    ));
    assert!(close(
        reg_inc_gamma_upper(2.0, 2.0).unwrap(),
        3.0 * (-2f64).exp(),
        1e-14
    ));
    assert!(reg_inc_gamma_lower(0.0, 1.0).is_err() && reg_inc_gamma_lower(1.0, -1.0).is_err());
    assert!(close(reg_inc_beta(1.0, 1.0, 0.3).unwrap(), 0.3, 1e-14));
    assert!(close(reg_inc_beta(2.0, 2.0, 0.5).unwrap(), 0.5, 1e-14));
    assert!(close(reg_inc_beta(2.0, 1.0, 0.5).unwrap(), 0.25, 1e-14));
    assert!(reg_inc_beta(1.0, 1.0, 1.5).is_err());
}

#[test]
fn tricomi_examples() {
    let cfg = QuadratureConfig::default();
    assert!(close(
        tricomi_u(1.0, 1.0, 1.0, &cfg).unwrap(),
        0.596_347_362_323_194_1,
        1e-9
    ));
    assert!(close(
        tricomi_u(0.5, 0.5, 1.0, &cfg).unwrap(),
        0.757_872_156_141_312_1,
        1e-9
    ));
    // U(a, b, z) ~ z^-a
    let z = 1e6;
    assert!(close(tricomi_u(1.3, 0.4, z, &cfg).unwrap() * z.powf(1.3), 1.0, 1e-5));
    // U(a, b, 0) = Γ(1-b)/Γ(a+1-b) for b < 1
    let (a, b) = (1.2366, -0.2775);
    let want = (ln_gamma(1.0 - b).unwrap() - ln_gamma(a + 1.0 - b).unwrap()).exp();
    assert!(close(tricomi_u(a, b, 0.0, &cfg).unwrap(), want, 1e-14));
    assert!(close(tricomi_u(a, b, 1e-12, &cfg).unwrap(), want, 1e-6));
    assert!(tricomi_u(-1.0, 1.0, 1.0, &cfg).is_err());
}

/// `ln U(a, b, z)` from mpmath at 30 digits.
const LN_U: &[(f64, f64, f64, f64)] = &[
    (0.5, 1.4, 1e-06, 5.749271595200031),
    (0.5, 1.4, 0.001, 2.9676503874132827),
    (0.5, 1.4, 0.05, 1.3309529172869639),
    (0.5, 1.4, 0.3, 0.5310984541075487),
    (0.5, 1.4, 0.9, 0.01765773387414555),
    (0.5, 1.4, 1.0, -0.03247635387117235),
    (0.5, 1.4, 3.0, -0.5629894505898265),
    (0.5, 1.4, 30.0, -1.7022233008207133),
    (0.5, 1.4, 1000.0, -3.4539275995610446),
    (0.5, 1.4, 1000000.0, -6.907755328982097),
    (1.2367, -0.2775, 1e-06, -0.39879995596583473),
    (1.2367, -0.2775, 0.001, -0.4024055163509358),
    (1.2367, -0.2775, 0.05, -0.511078023322003),
    (1.2367, -0.2775, 0.3, -0.8210319043702793),
    (1.2367, -0.2775, 0.9, -1.2459046708534323),
    (1.2367, -0.2775, 1.0, -1.299687199760805),
    (1.2367, -0.2775, 3.0, -2.014104093094213),
    (1.2367, -0.2775, 30.0, -4.302682494608014),
    (1.2367, -0.2775, 1000.0, -8.545922910002773),
    (1.2367, -0.2775, 1000000.0, -17.08564501633817),
    (0.6, 0.95, 1e-06, 1.962514593839342),
    (0.6, 0.95, 0.001, 1.4483015619045607),
    (0.6, 0.95, 0.05, 0.7934287621207199),
    (0.6, 0.95, 0.3, 0.26046817510653913),
    (0.6, 0.95, 0.9, -0.17876137001696868),
    (0.6, 0.95, 1.0, -0.22563565454101428),
    (0.6, 0.95, 3.0, -0.7593205912447488),
    (0.6, 0.95, 30.0, -2.053264380040636),
    (0.6, 0.95, 1000.0, -4.145042729637259),
    (0.6, 0.95, 1000000.0, -8.289306724778125),
    (3.15, 0.34, 1e-06, -1.2469552852457804),
    (3.15, 0.34, 0.001, -1.3014223459662393),
    (3.15, 0.34, 0.05, -1.8067522236486726),
    (3.15, 0.34, 0.3, -2.7122442766966466),
    (3.15, 0.34, 0.9, -3.7700874673578806),
    (3.15, 0.34, 1.0, -3.898988783015913),
    (3.15, 0.34, 3.0, -5.579691566214068),
    (3.15, 0.34, 30.0, -11.070296216837708),
    (3.15, 0.34, 1000.0, -21.7713831931276),
    (3.15, 0.34, 1000000.0, -43.518870259039694),
    (15.0, -5.0, 1e-06, -37.54812771796994),
    (15.0, -5.0, 0.001, -37.55112322029757),
    (15.0, -5.0, 0.05, -37.694630437025204),
    (15.0, -5.0, 0.3, -38.34996192875752),
    (15.0, -5.0, 0.9, -39.626693658127074),
    (15.0, -5.0, 1.0, -39.813796225826785),
    (15.0, -5.0, 3.0, -42.78016667294767),
    (15.0, -5.0, 30.0, -58.09505311409713),
    (15.0, -5.0, 1000.0, -103.92567557647622),
    (15.0, -5.0, 1000000.0, -207.2329733636368),
    (40.0, 1.0, 1e-06, -104.43618256655374),
    (40.0, 1.0, 0.001, -105.82477174142839),
    (40.0, 1.0, 0.05, -109.05401809971701),
    (40.0, 1.0, 0.3, -113.43199027301648),
    (40.0, 1.0, 0.9, -118.44985825959799),
    (40.0, 1.0, 1.0, -119.07284113393487),
    (40.0, 1.0, 3.0, -127.60395858596289),
    (40.0, 1.0, 30.0, -163.84293745489887),
    (40.0, 1.0, 1000.0, -277.8494631378551),
    (40.0, 1.0, 1000000.0, -552.6220222537754),
    (8.0, -3.0, 1e-06, -15.710551043310053),
    (8.0, -3.0, 0.001, -15.713212608932057),
    (8.0, -3.0, 0.05, -15.838619631885205),
    (8.0, -3.0, 0.3, -16.382025825090917),
    (8.0, -3.0, 0.9, -17.377666429988974),
    (8.0, -3.0, 1.0, -17.519459092984437),
    (8.0, -3.0, 3.0, -19.685028385930252),
    (8.0, -3.0, 30.0, -29.67799346679629),
    (8.0, -3.0, 1000.0, -55.35705169341469),
    (8.0, -3.0, 1000000.0, -110.52418046270621),
    (2.0, 1.49, 1e-06, 7.3593084262847785),
    (2.0, 1.49, 0.001, 3.9021851375131353),
    (2.0, 1.49, 0.05, 1.5644232030527145),
    (2.0, 1.49, 0.3, 0.05051916570855482),
    (2.0, 1.49, 0.9, -1.1713870673584805),
    (2.0, 1.49, 1.0, -1.303401462866811),
    (2.0, 1.49, 3.0, -2.845892908660879),
    (2.0, 1.49, 30.0, -6.896374690547102),
    (2.0, 1.49, 1000.0, -13.818523775763701),
    (2.0, 1.49, 1000000.0, -27.631024135921738),
    (25.0, -20.0, 1e-06, -86.78831842837366),
    (25.0, -20.0, 0.001, -86.78956710437016),
    (25.0, -20.0, 0.05, -86.85063333362328),
    (25.0, -20.0, 0.3, -87.15690137921874),
    (25.0, -20.0, 0.9, -87.85937849817394),
    (25.0, -20.0, 1.0, -87.97242824787878),
    (25.0, -20.0, 3.0, -90.04301662694861),
    (25.0, -20.0, 30.0, -105.77641450456848),
    (25.0, -20.0, 1000.0, -173.8047681534294),
    (25.0, -20.0, 1000000.0, -345.3889139077093),
];

#[test]
fn tricomi_matches_high_precision_values() {
    let cfg = QuadratureConfig::default();
    for &(a, b, z, want) in LN_U {
        let got = ln_tricomi_u(a, b, z, &cfg).unwrap();
        assert!(
            (got - want).abs() <= 1e-13 * want.abs().max(1.0),
            "U({a}, {b}, {z}): {got} vs {want}"
        );
    }
}
