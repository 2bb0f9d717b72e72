use lsc_core::codes::CodeSpec;
use lsc_core::gf::{FieldElement, FieldSpec};
use lsc_core::lsc::{code_rate, decode_list, rate_list_lower_bound, ListSourceCode, TrivialScheme};
use lsc_core::scheme::{derive_complement, two_phase_decrypt, two_phase_encrypt, InnerCipher};
use lsc_core::secrecy::{LeakageAnalyzer, SourceModel};
use num_rational::Ratio;
use serde::Serialize;

/// Source sequences the page is willing to enumerate per analysis.
pub const MAX_SEQUENCES: u64 = 200_000;

type Out = Result<String, String>;

fn field(q: u32) -> Result<FieldSpec, String> {
    FieldSpec::from_order(q, None).map_err(|e| e.to_string())
}

fn symbols(f: &FieldSpec, csv: &str) -> Result<Vec<FieldElement>, String> {
    csv.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: u64 = t.parse().map_err(|_| format!("not a symbol: {t:?}"))?;
            f.element(v).map_err(|e| e.to_string())
        })
        .collect()
}

fn values(xs: &[FieldElement]) -> Vec<u16> {
    xs.iter().map(|x| x.value()).collect()
}

/// Blank means uniform; otherwise `q` comma-separated weights, normalised.
fn source(f: &FieldSpec, pmf: &str) -> Result<SourceModel, String> {
    if pmf.trim().is_empty() || pmf.trim() == "uniform" {
        return Ok(SourceModel::uniform(f));
    }
    let w = pmf
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a weight: {t:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let total: f64 = w.iter().sum();
    if w.len() != f.order() as usize || w.iter().any(|x| !x.is_finite() || *x < 0.0) || total <= 0.0
    {
        return Err(format!("need {} nonnegative weights", f.order()));
    }
    SourceModel::new(f, w.iter().map(|x| x / total).collect()).map_err(|e| e.to_string())
}

fn check_size(q: u32, n: usize) -> Result<(), String> {
    match (q as u64).checked_pow(n as u32) {
        Some(c) if c <= MAX_SEQUENCES => Ok(()),
        _ => Err(format!(
            "{q}^{n} sequences is too many for the browser demo"
        )),
    }
}

fn ratio(r: Ratio<usize>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn encoder(
    f: &FieldSpec,
    n: usize,
    k: usize,
    scheme: &str,
) -> Result<Box<dyn ListSourceCode>, String> {
    if n == 0 || k > n {
        return Err("need 0 <= k <= n and n >= 1".into());
    }
    match scheme {
        "vandermonde" => CodeSpec::vandermonde(f, n, k, None)
            .map(|c| Box::new(c) as Box<dyn ListSourceCode>)
            .map_err(|e| e.to_string()),
        "trivial" => TrivialScheme::new(f, n, Ratio::new(k, n))
            .map(|t| Box::new(t) as Box<dyn ListSourceCode>)
            .map_err(|e| e.to_string()),
        other => Err(format!("unknown scheme {other:?}")),
    }
}

#[derive(Serialize)]
struct Report {
    q: u32,
    n: usize,
    k: usize,
    scheme: String,
    source_entropy: f64,
    epsilon: f64,
    mu_epsilon: f64,
    mu_zero: f64,
    secrecy_bound: f64,
    leakage_bound: f64,
    measured_total_leak: f64,
    rate_list_bound: f64,
    per_symbol_leak: Vec<f64>,
    rate_list_optimal: bool,
    text: String,
}

pub fn analyze(q: u32, n: usize, k: usize, scheme: &str, pmf: &str, epsilon: f64) -> Out {
    let f = field(q)?;
    check_size(q, n)?;
    let src = source(&f, pmf)?;
    let enc = encoder(&f, n, k, scheme)?;
    let r = LeakageAnalyzer::new(enc.as_ref(), &src)
        .and_then(|a| a.report(epsilon))
        .map_err(|e| e.to_string())?;
    let out = Report {
        q,
        n,
        k,
        scheme: scheme.to_string(),
        source_entropy: r.source_entropy,
        epsilon,
        mu_epsilon: r.mu_epsilon_f64(),
        mu_zero: r.mu_zero_f64(),
        secrecy_bound: r.secrecy_bound,
        leakage_bound: r.leakage_bound,
        measured_total_leak: r.measured_total_leak,
        rate_list_bound: r.rate_list_bound,
        per_symbol_leak: r.per_symbol_leak.clone(),
        rate_list_optimal: r.rate_list_optimal,
        text: r.to_text(),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CurvePoint {
    k: usize,
    list_exponent: f64,
    rate_list_bound: f64,
    code_rate: f64,
    output_entropy_rate: f64,
    mu_zero_vandermonde: f64,
    mu_zero_trivial: f64,
    secrecy_bound: f64,
}

#[derive(Serialize)]
struct Curve {
    q: u32,
    n: usize,
    source_entropy: f64,
    log2_q: f64,
    points: Vec<CurvePoint>,
}

pub fn rate_list_curve(q: u32, n: usize, pmf: &str) -> Out {
    let f = field(q)?;
    check_size(q, n)?;
    let src = source(&f, pmf)?;
    let h = src.entropy_bits();
    let log_q = f.log2_order();
    let mut points = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let code = CodeSpec::vandermonde(&f, n, k, None).map_err(|e| e.to_string())?;
        let trivial = TrivialScheme::new(&f, n, Ratio::new(k, n)).map_err(|e| e.to_string())?;
        let an = LeakageAnalyzer::new(&code, &src).map_err(|e| e.to_string())?;
        let mu_v = an.mu_epsilon(0.0).map_err(|e| e.to_string())?;
        let mu_t = LeakageAnalyzer::new(&trivial, &src)
            .and_then(|a| a.mu_epsilon(0.0))
            .map_err(|e| e.to_string())?;
        let l = k as f64 / n as f64;
        points.push(CurvePoint {
            k,
            list_exponent: l,
            rate_list_bound: rate_list_lower_bound(h, l, q),
            code_rate: code_rate(&code).bits_per_symbol,
            output_entropy_rate: an.output_entropy_bits() / n as f64,
            mu_zero_vandermonde: ratio(mu_v),
            mu_zero_trivial: ratio(mu_t),
            secrecy_bound: if h > 0.0 {
                (l * log_q / h).min(1.0)
            } else {
                1.0
            },
        });
    }
    serde_json::to_string(&Curve {
        q,
        n,
        source_entropy: h,
        log2_q: log_q,
        points,
    })
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TwoPhase {
    parity_check: Vec<Vec<u16>>,
    complement: Vec<Vec<u16>>,
    phase1: Vec<u16>,
    phase2: Vec<u16>,
    decrypted: Vec<u16>,
    wrong_key_decrypted: Vec<u16>,
    wrong_key_in_coset: bool,
    list_size: String,
}

pub fn two_phase(q: u32, n: usize, k: usize, message: &str, key: &str, wrong_key: &str) -> Out {
    let f = field(q)?;
    let code = CodeSpec::vandermonde(&f, n, k, None).map_err(|e| e.to_string())?;
    let d = derive_complement(&code).map_err(|e| e.to_string())?;
    let x = symbols(&f, message)?;
    let right = InnerCipher::OneTimePad {
        key: symbols(&f, key)?,
    };
    let wrong = InnerCipher::OneTimePad {
        key: symbols(&f, wrong_key)?,
    };
    let bundle = two_phase_encrypt(&x, &code, &d, &right).map_err(|e| e.to_string())?;
    let decrypted = two_phase_decrypt(&bundle, &code, &d, &right).map_err(|e| e.to_string())?;
    let guess = two_phase_decrypt(&bundle, &code, &d, &wrong).map_err(|e| e.to_string())?;
    let list = decode_list(&code, &bundle.phase1).map_err(|e| e.to_string())?;
    let in_coset = list.contains(&guess).map_err(|e| e.to_string())?;
    serde_json::to_string(&TwoPhase {
        parity_check: code.parity_check().to_rows(),
        complement: d.to_rows(),
        phase1: values(bundle.phase1.symbols()),
        phase2: values(&bundle.phase2),
        decrypted: values(&decrypted),
        wrong_key_decrypted: values(&guess),
        wrong_key_in_coset: in_coset,
        list_size: list.cardinality_exact().to_string(),
    })
    .map_err(|e| e.to_string())
}
