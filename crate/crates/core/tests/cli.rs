use std::fs;
use std::path::Path;

use lsc_core::cli::{run, EXIT_CAPACITY, EXIT_DATA, EXIT_OK, EXIT_USAGE};
use lsc_core::container::Container;

fn lsc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("lsc").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn mk_code_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for tag in ["a", "b"] {
        let (code, _, err) = lsc(&[
            "mk-code",
            "--q",
            "5",
            "--n",
            "4",
            "--k",
            "2",
            "--out-h",
            &path(dir.path(), &format!("h{tag}")),
            "--out-d",
            &path(dir.path(), &format!("d{tag}")),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
    }
    let read = |n: &str| fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("ha"), read("hb"));
    assert_eq!(read("da"), read("db"));
    let h = Container::from_bytes(&read("ha"))
        .unwrap()
        .to_matrix()
        .unwrap();
    assert_eq!(h.to_rows(), vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]);
}

#[test]
fn otp_encrypt_decrypt_and_list_decode() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| path(dir.path(), n);
    assert_eq!(
        lsc(&[
            "mk-code",
            "--q",
            "5",
            "--n",
            "4",
            "--k",
            "2",
            "--out-h",
            &p("h"),
            "--out-d",
            &p("d")
        ])
        .0,
        0
    );
    assert_eq!(
        lsc(&["pack", "--q", "5", "--symbols", "1,2,3,4", "--out", &p("x")]).0,
        0
    );
    let (code, _, err) = lsc(&[
        "encrypt",
        "--code",
        &p("h"),
        "--cipher",
        "otp",
        "--key",
        "3,1",
        "--in",
        &p("x"),
        "--out-phase1",
        &p("p1"),
        "--out-phase2",
        &p("p2"),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let p2 = Container::from_bytes(&fs::read(p("p2")).unwrap()).unwrap();
    assert_eq!(
        p2.symbols.iter().map(|s| s.value()).collect::<Vec<_>>(),
        vec![4, 3]
    );

    let (code, _, err) = lsc(&[
        "decrypt",
        "--code",
        &p("h"),
        "--cipher",
        "otp",
        "--key",
        "3,1",
        "--in-phase1",
        &p("p1"),
        "--in-phase2",
        &p("p2"),
        "--out",
        &p("y"),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(fs::read(p("x")).unwrap(), fs::read(p("y")).unwrap());

    let (code, out, err) = lsc(&["decode-list", "--code", &p("h"), "--syndrome", &p("p1")]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out.lines().count(), 25);
    assert!(out.lines().any(|l| l == "1,2,3,4"));
    assert!(err.contains("coset size 25"));

    let (_, out, _) = lsc(&[
        "decode-list",
        "--code",
        &p("h"),
        "--syndrome",
        &p("p1"),
        "--limit",
        "3",
    ]);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn encode_matches_phase_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| path(dir.path(), n);
    lsc(&[
        "mk-code",
        "--q",
        "7",
        "--n",
        "5",
        "--k",
        "2",
        "--out-h",
        &p("h"),
        "--out-d",
        &p("d"),
    ]);
    lsc(&[
        "pack",
        "--q",
        "7",
        "--symbols",
        "6,0,2,5,1",
        "--out",
        &p("x"),
    ]);
    assert_eq!(
        lsc(&[
            "encode",
            "--code",
            &p("h"),
            "--in",
            &p("x"),
            "--out",
            &p("s")
        ])
        .0,
        0
    );
    lsc(&[
        "encrypt",
        "--code",
        &p("h"),
        "--cipher",
        "prg",
        "--seed",
        "9",
        "--in",
        &p("x"),
        "--out-phase1",
        &p("p1"),
        "--out-phase2",
        &p("p2"),
    ]);
    let s = Container::from_bytes(&fs::read(p("s")).unwrap()).unwrap();
    let p1 = Container::from_bytes(&fs::read(p("p1")).unwrap()).unwrap();
    assert_eq!(s.symbols, p1.symbols);
    let (_, shown, _) = lsc(&["show", &p("p2")]);
    assert!(shown.contains("seed = 9"), "{shown}");
}

#[test]
fn analyze_pmf_file() {
    let dir = tempfile::tempdir().unwrap();
    let pmf = dir.path().join("pmf.txt");
    fs::write(&pmf, "0.1\n0.9\n").unwrap();
    let (code, out, err) = lsc(&[
        "analyze",
        "--q",
        "2",
        "--n",
        "2",
        "--k",
        "1",
        "--source",
        pmf.to_str().unwrap(),
        "--epsilon",
        "0",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let r = lsc_core::secrecy::parse_report_text(&out);
    let leaks: Vec<f64> = r["per_symbol_leak"]
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((leaks[0] - 0.211081).abs() < 1e-6);
    assert_eq!(r["mu_zero"], "0");

    fs::write(&pmf, "0.1\n0.8\n").unwrap();
    let (code, _, _) = lsc(&[
        "analyze",
        "--q",
        "2",
        "--n",
        "2",
        "--k",
        "1",
        "--source",
        pmf.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_DATA);
}

#[test]
fn analyze_trivial_scheme() {
    let (code, out, _) = lsc(&[
        "analyze", "--q", "3", "--n", "3", "--k", "1", "--scheme", "trivial",
    ]);
    assert_eq!(code, EXIT_OK);
    let r = lsc_core::secrecy::parse_report_text(&out);
    assert_eq!(r["mu_zero"], "0");
    assert!(r["per_symbol_leak"].ends_with(",0"));
}

#[test]
fn malformed_container_reports_offset() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| path(dir.path(), n);
    lsc(&[
        "mk-code",
        "--q",
        "5",
        "--n",
        "4",
        "--k",
        "2",
        "--out-h",
        &p("h"),
        "--out-d",
        &p("d"),
    ]);
    let mut bytes = fs::read(p("h")).unwrap();
    bytes[0] = b'X';
    fs::write(p("bad"), &bytes).unwrap();
    lsc(&["pack", "--q", "5", "--symbols", "1,2,3,4", "--out", &p("x")]);
    let (code, _, err) = lsc(&[
        "encode",
        "--code",
        &p("bad"),
        "--in",
        &p("x"),
        "--out",
        &p("s"),
    ]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("at byte 0"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(lsc(&["encode"]).0, EXIT_USAGE);
    assert_eq!(
        lsc(&[
            "pack",
            "--q",
            "5",
            "--symbols",
            "7",
            "--out",
            "/nonexistent/x"
        ])
        .0,
        EXIT_USAGE
    );
    assert_eq!(lsc(&["show", "/nonexistent/file"]).0, EXIT_DATA);
    assert_eq!(
        lsc(&["analyze", "--q", "13", "--n", "7", "--k", "2"]).0,
        EXIT_CAPACITY
    );
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| path(dir.path(), n);
    lsc(&[
        "mk-code",
        "--q",
        "256",
        "--n",
        "8",
        "--k",
        "6",
        "--out-h",
        &p("h"),
        "--out-d",
        &p("d"),
    ]);
    lsc(&[
        "pack",
        "--q",
        "256",
        "--symbols",
        "1,2,3,4,5,6,7,8",
        "--out",
        &p("x"),
    ]);
    lsc(&[
        "encode",
        "--code",
        &p("h"),
        "--in",
        &p("x"),
        "--out",
        &p("s"),
    ]);
    // 256^6 members exceed the enumeration cap.
    assert_eq!(
        lsc(&["decode-list", "--code", &p("h"), "--syndrome", &p("s")]).0,
        EXIT_CAPACITY
    );
}
