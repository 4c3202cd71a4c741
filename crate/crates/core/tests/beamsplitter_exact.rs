//! Beamsplitter transition probabilities against exact rational arithmetic.

use bosonic_metrology::fock::{beamsplitter_transition, beamsplitter_transition_sum};
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

fn binomial(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for j in 0..k {
        c = c * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    c
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// `p(n′|n,m) = n′!m′!/(n!m!) κ^{n′+m}(1−κ)^{n−n′} [Σⱼ C(n,n′−j)C(m,j)(−1)ʲ((1−κ)/κ)ʲ]²`
/// with `n′ − j` photons transmitted from the system and `j` reflected in
/// from the environment. Written so that only rational powers appear.
fn exact(nprime: usize, n: usize, m: usize, kappa: &BigRational) -> BigRational {
    if nprime > n + m {
        return BigRational::zero();
    }
    let mprime = n + m - nprime;
    let one = BigRational::one();
    let loss = &one - kappa;
    let ratio = &loss / kappa;
    let mut s = BigRational::zero();
    for j in 0..=m.min(nprime) {
        let k = nprime - j;
        if k > n {
            continue;
        }
        let term = BigRational::from_integer(binomial(n, k) * binomial(m, j)) * pow(&ratio, j);
        if j % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    // κ^{n′+m}(1−κ)^{n−n′} with a possibly negative second exponent
    let base = pow(kappa, nprime + m);
    let scaled = if n >= nprime {
        base * pow(&loss, n - nprime)
    } else {
        base / pow(&loss, nprime - n)
    };
    let pref = BigRational::new(factorial(nprime) * factorial(mprime), factorial(n) * factorial(m));
    pref * scaled * &s * &s
}

#[test]
fn matches_rational_arithmetic_up_to_twelve_photons() {
    let kappas = [(1, 3), (2, 5), (7, 10), (1, 2), (9, 10)];
    for &(p, q) in &kappas {
        let kr = BigRational::new(BigInt::from(p), BigInt::from(q));
        let kf = p as f64 / q as f64;
        for n in 0..=12usize {
            for m in 0..=(12 - n) {
                let mut total = BigRational::zero();
                for np in 0..=(n + m) {
                    let e = exact(np, n, m, &kr);
                    total += &e;
                    let e = e.to_f64().unwrap();
                    let fast = beamsplitter_transition(np, n, m, kf).unwrap();
                    let direct = beamsplitter_transition_sum(np, n, m, kf);
                    assert!((fast - e).abs() < 1e-13, "n′={np} n={n} m={m} κ={kf}: {fast} vs {e}");
                    assert!((direct - e).abs() < 1e-11, "sum n′={np} n={n} m={m} κ={kf}: {direct} vs {e}");
                }
                assert_eq!(total, BigRational::one(), "n={n} m={m}");
            }
        }
    }
}

#[test]
fn mirror_symmetries() {
    // exchanging the inputs together with κ ↔ 1−κ leaves the system count
    // unchanged; κ ↔ 1−κ alone exchanges the two output ports
    for n in 0..8usize {
        for m in 0..8usize {
            for &kappa in &[0.2, 0.45, 0.8] {
                for np in 0..=(n + m) {
                    let a = beamsplitter_transition(np, n, m, kappa).unwrap();
                    let swapped = beamsplitter_transition(np, m, n, 1.0 - kappa).unwrap();
                    let ports = beamsplitter_transition(n + m - np, n, m, 1.0 - kappa).unwrap();
                    assert!((a - swapped).abs() < 1e-12, "n′={np} n={n} m={m}");
                    assert!((a - ports).abs() < 1e-12, "n′={np} n={n} m={m}");
                }
            }
        }
    }
}
