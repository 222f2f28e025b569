use super::*;
use crate::corpus::Sentence;
use proptest::prelude::*;
use std::io::Write;

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let scale = b
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        / scale
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn sentences(lines: &[&str]) -> Vec<Sentence> {
    lines
        .iter()
        .map(|l| Sentence::from_words(l).unwrap())
        .collect()
}

#[test]
fn cosine_basics() {
    let v = [0.3, -1.2, 2.0];
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    assert!((cosine(&v, &v).unwrap() - 1.0).abs() < 1e-15);
    assert!((cosine(&v, &neg).unwrap() + 1.0).abs() < 1e-15);
    assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    assert_eq!(cosine(&[0.0, 0.0], &[1.0, 2.0]).unwrap(), 0.0);
    assert!(matches!(
        cosine(&[1.0], &[1.0, 2.0]),
        Err(Error::Dimension { .. })
    ));
}

#[test]
fn bind_golden_d4() {
    // out[k] = sum_j u[j] v[(k - j) mod 4], expanded by hand
    let u = [1.0, 2.0, 3.0, 4.0];
    let v = [5.0, 6.0, 7.0, 8.0];
    let want = [66.0, 68.0, 66.0, 60.0];
    assert_eq!(bind_direct(&u, &v).unwrap(), want);
    assert!(max_abs_diff(&bind(&u, &v).unwrap(), &want) < 1e-12);
}

#[test]
fn bind_identity_and_errors() {
    let v = random_vector("x", 1, 16);
    let mut e0 = vec![0.0; 16];
    e0[0] = 1.0;
    assert_eq!(bind_direct(&e0, &v).unwrap(), v);
    assert!(max_abs_diff(&bind(&e0, &v).unwrap(), &v) < 1e-15);
    assert!(bind(&[1.0, 2.0], &[1.0]).is_err());
    assert!(bind_direct(&[1.0, 2.0], &[1.0]).is_err());
}

#[test]
fn fast_bind_matches_direct() {
    for d in [4, 64, 1024] {
        let u = random_vector("left", 3, d);
        let v = random_vector("right", 3, d);
        let err = rel_err(&bind(&u, &v).unwrap(), &bind_direct(&u, &v).unwrap());
        assert!(err < 1e-6, "d={d}: {err}");
    }
}

#[test]
fn bind_algebra_d64() {
    let u = random_vector("u", 9, 64);
    let v = random_vector("v", 9, 64);
    let w = random_vector("w", 9, 64);
    assert!(max_abs_diff(&bind(&u, &v).unwrap(), &bind(&v, &u).unwrap()) < 1e-9);
    let left = bind(&bind(&u, &v).unwrap(), &w).unwrap();
    let right = bind(&u, &bind(&v, &w).unwrap()).unwrap();
    assert!(max_abs_diff(&left, &right) < 1e-9);
}

#[test]
fn random_vectors_are_deterministic_and_nearly_orthogonal() {
    assert_eq!(random_vector("zebra", 7, 32), random_vector("zebra", 7, 32));
    assert_ne!(random_vector("zebra", 7, 32), random_vector("zebra", 8, 32));
    let d = 1024;
    let vs: Vec<Vec<f64>> = (0..1001)
        .map(|i| random_vector(&format!("oov{i}"), 42, d))
        .collect();
    let worst = (0..1000)
        .map(|i| cosine(&vs[i], &vs[i + 1]).unwrap().abs())
        .fold(0.0f64, f64::max);
    // 1/sqrt(d) ~ 0.031, so 0.2 is over six standard deviations
    assert!(worst < 0.2, "{worst}");
}

#[test]
fn environment_statistics() {
    let d = 1024;
    let mut sum = 0.0;
    let mut sq = 0.0;
    let mut n = 0.0;
    for i in 0..1000 {
        for x in random_vector(&format!("w{i}"), DEFAULT_SEED, d) {
            sum += x;
            sq += x * x;
            n += 1.0;
        }
    }
    let mean = sum / n;
    let var = sq / n - mean * mean;
    assert!(mean.abs() < 2e-4, "{mean}");
    assert!((var * d as f64 - 1.0).abs() < 0.01, "{var}");
}

#[test]
fn space_lookup_and_fallback() {
    let mut s = EmbeddingSpace::new(3, 11).unwrap();
    s.insert(Token::new("cat").unwrap(), vec![1.0, 2.0, 3.0])
        .unwrap();
    assert_eq!(&*s.lookup("cat"), &[1.0, 2.0, 3.0]);
    assert_eq!(s.lookup("dog"), s.lookup("dog"));
    assert_eq!(&*s.lookup("dog"), random_vector("dog", 11, 3).as_slice());
    assert!(s.insert(Token::new("bad").unwrap(), vec![1.0]).is_err());
    assert!(s
        .insert(Token::new("nan").unwrap(), vec![f64::NAN, 0.0, 0.0])
        .is_err());
    assert!(EmbeddingSpace::new(0, 1).is_err());
}

#[test]
fn parse_small_file() {
    let text = "cat 0.1 0.2 0.3\nDog -1 0 1e-2\n\ncat 9 9 9\n";
    let s = parse_embeddings(text.as_bytes(), Path::new("t.txt"), 1).unwrap();
    assert_eq!(s.dimension(), 3);
    assert_eq!(s.len(), 2);
    assert_eq!(&*s.lookup("cat"), &[0.1, 0.2, 0.3]);
    assert_eq!(&*s.lookup("dog"), &[-1.0, 0.0, 0.01]);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let p = Path::new("e.txt");
    assert!(matches!(
        parse_embeddings("".as_bytes(), p, 1),
        Err(Error::Empty(_))
    ));
    match parse_embeddings("a 1 2\nb 1 2\nc 1\n".as_bytes(), p, 1) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    match parse_embeddings("a 1 2\nb 1 x\n".as_bytes(), p, 1) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(parse_embeddings("lonely\n".as_bytes(), p, 1).is_err());
    assert!(load_embeddings("/nonexistent/vectors.txt", 1).is_err());
}

#[test]
fn large_file_entry_count_matches_line_count() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for i in 0..50_000 {
        writeln!(
            f,
            "word{i} {} {} {}",
            i as f64 * 0.5,
            -(i as f64),
            1.0 / (i as f64 + 1.0)
        )
        .unwrap();
    }
    f.flush().unwrap();
    let lines = std::fs::read_to_string(f.path())
        .unwrap()
        .matches('\n')
        .count();
    let s = load_embeddings(f.path(), 1).unwrap();
    assert_eq!(s.len(), lines);
}

#[test]
fn hhm_two_token_hand_unroll() {
    let m = train_hhm(&sentences(&["a b"]), 16, 2, 1, 5).unwrap();
    let (ea, eb) = (m.environment("a"), m.environment("b"));
    let unit = |mut v: Vec<f64>| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        v
    };
    // a sees b one step to the right, b sees a one step to the left
    let a1 = unit(bind_direct(&m.permute_right(&eb), m.role(1).unwrap()).unwrap());
    let b1 = unit(bind_direct(&m.permute_left(&ea), m.role(-1).unwrap()).unwrap());
    assert!(max_abs_diff(&m.memory(1, "a").unwrap(), &a1) < 1e-12);
    assert!(max_abs_diff(&m.memory(1, "b").unwrap(), &b1) < 1e-12);
    let a2 = unit(bind_direct(&m.permute_right(&b1), m.role(1).unwrap()).unwrap());
    assert!(max_abs_diff(&m.memory(2, "a").unwrap(), &a2) < 1e-12);
}

#[test]
fn hhm_window_sums_over_occurrences() {
    // "x" occurs twice; at window 2 its memory sums three neighbour bindings
    let m = train_hhm(&sentences(&["x y z", "z x"]), 32, 1, 2, 9).unwrap();
    let part = |w: &str, off: isize| {
        let p = if off < 0 {
            m.permute_left(&m.environment(w))
        } else {
            m.permute_right(&m.environment(w))
        };
        bind_direct(&p, m.role(off).unwrap()).unwrap()
    };
    let mut want = vec![0.0; 32];
    for v in [part("y", 1), part("z", 2), part("z", -1)] {
        want.iter_mut().zip(&v).for_each(|(a, b)| *a += b);
    }
    normalize(&mut want);
    assert!(max_abs_diff(&m.memory(1, "x").unwrap(), &want) < 1e-12);
}

#[test]
fn hhm_is_deterministic_and_order_free() {
    let lines = [
        "the cat sat on the mat",
        "a dog ran",
        "the dog sat",
        "cat and dog",
    ];
    let m1 = train_hhm(&sentences(&lines), 64, 3, 2, 1).unwrap();
    let m2 = train_hhm(&sentences(&lines), 64, 3, 2, 1).unwrap();
    assert_eq!(m1, m2);
    let mut rev = lines.to_vec();
    rev.reverse();
    let m3 = train_hhm(&sentences(&rev), 64, 3, 2, 1).unwrap();
    for level in 1..=3 {
        for w in m1.words() {
            let d = max_abs_diff(
                &m1.memory(level, w.as_str()).unwrap(),
                &m3.memory(level, w.as_str()).unwrap(),
            );
            assert!(d < 1e-9);
        }
    }
    let other_seed = train_hhm(&sentences(&lines), 64, 3, 2, 2).unwrap();
    assert_ne!(m1, other_seed);
}

#[test]
fn hhm_memories_are_unit_and_fallback_is_environment() {
    let m = train_hhm(
        &sentences(&["one two three", "two three four five"]),
        32,
        2,
        3,
        4,
    )
    .unwrap();
    for level in 1..=2 {
        for w in m.words() {
            let v = m.memory(level, w.as_str()).unwrap();
            assert!(v.iter().all(|x| x.is_finite()));
            assert!((norm(&v) - 1.0).abs() < 1e-12);
        }
    }
    assert!(!m.contains("absent"));
    assert_eq!(
        &*m.memory(2, "absent").unwrap(),
        m.environment("absent").as_slice()
    );
    assert_eq!(
        m.memory(1, "absent").unwrap(),
        m.memory(1, "absent").unwrap()
    );
    assert_eq!(
        &*m.level(0).unwrap().vector("two"),
        m.environment("two").as_slice()
    );
    assert!(m.memory(0, "two").is_err());
    assert!(m.memory(3, "two").is_err());
    assert!(m.level(3).is_err());
    assert!(m.role(0).is_none() && m.role(4).is_none() && m.role(-3).is_some());
}

#[test]
fn hhm_parameter_errors() {
    let c = sentences(&["a b"]);
    assert!(matches!(
        train_hhm(&c, 1, 1, 1, 0),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        train_hhm(&c, 8, 0, 1, 0),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        train_hhm(&c, 8, 1, 0, 0),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(train_hhm(&[], 8, 1, 1, 0), Err(Error::Empty(_))));
}

#[test]
fn hhm_round_trip_is_bit_exact() {
    let m = train_hhm(&sentences(&["a b c", "c b a d"]), 24, 2, 2, 77).unwrap();
    let bytes = m.write_to(Vec::new()).unwrap();
    let back = HhmModel::read_from(&bytes[..]).unwrap();
    assert_eq!(back, m);
    assert_eq!(
        back.permute_left(&m.environment("a")),
        m.permute_left(&m.environment("a"))
    );
    assert_eq!(back.role(-2), m.role(-2));
    assert_eq!(back.write_to(Vec::new()).unwrap(), bytes);
    assert!(HhmModel::read_from(&bytes[..bytes.len() - 1]).is_err());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.bin");
    m.save(&path).unwrap();
    assert_eq!(HhmModel::load(&path).unwrap(), m);
}

proptest! {
    #[test]
    fn bind_is_commutative(u in prop::collection::vec(-10.0f64..10.0, 1..40), seed in 0u64..1000) {
        let v = random_vector("p", seed, u.len());
        let a = bind_direct(&u, &v).unwrap();
        let b = bind_direct(&v, &u).unwrap();
        prop_assert!(max_abs_diff(&a, &b) < 1e-9);
        prop_assert!(rel_err(&bind(&u, &v).unwrap(), &a) < 1e-9);
    }

    #[test]
    fn cosine_is_bounded(u in prop::collection::vec(-5.0f64..5.0, 4), v in prop::collection::vec(-5.0f64..5.0, 4)) {
        let c = cosine(&u, &v).unwrap();
        prop_assert!((-1.0..=1.0).contains(&c));
        prop_assert_eq!(c, cosine(&v, &u).unwrap());
    }
}
