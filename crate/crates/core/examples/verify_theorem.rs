use std::time::Instant;

use schurci::ci::{verify_main_theorem, SamplerConfig};

fn main() -> schurci::Result<()> {
    let mut args = std::env::args().skip(1);
    let p: u32 = args.next().and_then(|a| a.parse().ok()).unwrap_or(2);
    let q: u32 = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let samples: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let start = Instant::now();
    let report = verify_main_theorem(&SamplerConfig::new(p, q, samples, 1))?;
    print!("{}", report.to_text());
    eprintln!("elapsed {:.1}s", start.elapsed().as_secs_f64());
    Ok(())
}
