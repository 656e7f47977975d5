//! One function per subcommand. Each returns the CSV body; the caller adds the
//! manifest header and writes it out.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cssqkd_core::exponent::{self, ExponentResult};
use cssqkd_core::gf2::{random_code, sample_supercode};
use cssqkd_core::protocol::{self, ChannelModel, EveModel, ProtocolConfig, CSV_HEADER};
use cssqkd_core::security_bound::{mutual_info_bound, BoundInput};
use cssqkd_core::{keyrate, rng, ChannelSpec, CodePair, LinearCode, NestedCodes};
use rayon::prelude::*;

use crate::args::{
    BoundArgs, ChannelKind, EveKind, ExponentArgs, KeyrateArgs, Method, Orientation, PerrArgs,
    SampleCodeArgs, SimulateArgs,
};
use crate::error::CliError;

/// Result of one subcommand, before the manifest header is attached.
#[derive(Debug, Default)]
pub struct Body {
    pub csv: String,
    /// Extra file written alongside the main output.
    pub side_file: Option<(PathBuf, String)>,
    /// `Some(true)` when a simulation ran and every session aborted.
    pub all_aborted: Option<bool>,
}

impl Body {
    fn csv(csv: String) -> Self {
        Self {
            csv,
            ..Self::default()
        }
    }
}

fn opt<T: std::fmt::Debug>(v: Option<T>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

pub fn exponent(a: &ExponentArgs) -> Result<Body, CliError> {
    let res: ExponentResult = exponent::exponent_closed_form(a.r, a.p0, a.p1)?;
    let mut head = String::from("R,p0,p1,value,regime,q0,q1,beta");
    let mut row = format!(
        "{:?},{:?},{:?},{:?},{},{:?},{:?},{}",
        a.r,
        a.p0,
        a.p1,
        res.value,
        res.regime,
        res.minimizer_q0,
        res.minimizer_q1,
        opt(res.beta)
    );
    if a.check_grid {
        let grid = exponent::exponent_grid(a.r, a.p0, a.p1, a.grid_steps)?;
        head.push_str(",grid_value,grid_delta");
        let _ = write!(row, ",{:?},{:?}", grid.value, (grid.value - res.value).abs());
    }
    if let (Some(n), Some(mu)) = (a.n, a.mu) {
        if !(mu > 0.0) {
            return Err(CliError::Usage(format!("--mu must be positive, got {mu}")));
        }
        head.push_str(",n,mu,perr_bound,bound_probability");
        let _ = write!(
            row,
            ",{n},{mu:?},{:?},{:?}",
            exponent::perr_bound(n, res.value, mu),
            exponent::bound_probability(n, mu)
        );
    }
    Ok(Body::csv(format!("{head}\n{row}\n")))
}

pub fn keyrate(a: &KeyrateArgs) -> Result<Body, CliError> {
    let (lump, mayers) = keyrate::emit_curves(a.p_max, a.steps)?;
    let mut s = String::new();
    let _ = writeln!(s, "# threshold_this_paper={}", opt(lump.threshold));
    let _ = writeln!(s, "# threshold_mayers={}", opt(mayers.threshold));
    s.push_str("p,rate_this_paper,rate_mayers\n");
    for (&(p, l), &(_, m)) in lump.samples.iter().zip(&mayers.samples) {
        let _ = writeln!(s, "{p:?},{l:?},{m:?}");
    }
    Ok(Body::csv(s))
}

pub fn read_code(path: &Path) -> Result<LinearCode, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    LinearCode::from_text(&text).map_err(|source| CliError::CodeFile {
        path: path.to_path_buf(),
        source,
    })
}

pub fn perr(a: &PerrArgs) -> Result<Body, CliError> {
    let c1_dual = read_code(&a.c1_dual)?;
    let pair = match (&a.c2_dual, a.m) {
        (Some(path), _) => CodePair::new(c1_dual, read_code(path)?)?,
        (None, Some(m)) => sample_supercode(&c1_dual, m, &mut rng::master(a.common.seed))?,
        (None, None) => unreachable!("clap requires one of --c2-dual and --m"),
    };
    let (codes, ch) = match a.orientation {
        Orientation::Phase => (NestedCodes::phase(&pair)?, ChannelSpec::phase(a.p0, a.p1)?),
        Orientation::Bit => (NestedCodes::bit(&pair)?, ChannelSpec::bit(a.p0, a.p1)?),
    };
    let exact = match a.method {
        Method::Exact => true,
        Method::MonteCarlo => false,
        Method::Auto => pair.n() <= a.cap,
    };
    let est = if exact {
        codes.exact_perr(&ch, a.cap)?
    } else {
        codes.monte_carlo_perr(&ch, a.trials, a.common.seed)?
    };
    Ok(Body::csv(format!(
        "method,value,ci,trials,n,r,m,p_first,p_second\n{},{:?},{:?},{},{},{},{},{:?},{:?}\n",
        est.method.as_str(),
        est.value,
        est.ci_halfwidth,
        est.trials,
        pair.n(),
        pair.r(),
        pair.m(),
        ch.p_first(),
        ch.p_second()
    )))
}

pub fn bound(a: &BoundArgs) -> Result<Body, CliError> {
    let input = BoundInput::new(a.n, a.epsilon, a.delta)?;
    let r = mutual_info_bound(&input);
    Ok(Body::csv(format!(
        "n,epsilon,delta,theta,bound,bound_per_bit,vacuous\n{},{:?},{:?},{:?},{:?},{:?},{}\n",
        a.n, a.epsilon, a.delta, r.theta, r.bound, r.bound_per_bit, r.vacuous
    )))
}

pub fn simulate(a: &SimulateArgs) -> Result<Body, CliError> {
    let cfg = ProtocolConfig {
        n: a.n,
        theta: a.theta,
        delta: a.delta,
        code_registry_id: a.registry.clone(),
        m: a.m,
        channel: match a.channel {
            ChannelKind::Noiseless => ChannelModel::Noiseless,
            ChannelKind::Bsc => ChannelModel::Bsc { pz: a.pz, px: a.px },
        },
        eve: match a.eve {
            EveKind::None => EveModel::None,
            EveKind::InterceptResend => EveModel::InterceptResend {
                fraction: a.eve_fraction,
            },
        },
        seed: a.common.seed,
    };
    cfg.validate()?;
    let sessions = (0..a.sessions)
        .into_par_iter()
        .map(|i| protocol::run_bb84(&cfg.session(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = format!("{CSV_HEADER}\n");
    for t in &sessions {
        csv.push_str(&t.csv_row());
        csv.push('\n');
    }
    let side_file = a.transcript.as_ref().map(|path| {
        let text = sessions
            .iter()
            .map(|t| t.to_text())
            .collect::<Vec<_>>()
            .join("\n");
        (path.clone(), text)
    });
    Ok(Body {
        csv,
        side_file,
        all_aborted: Some(!sessions.is_empty() && sessions.iter().all(|t| t.aborted())),
    })
}

pub fn sample_code(a: &SampleCodeArgs) -> Result<Body, CliError> {
    let mut rng = rng::master(a.common.seed);
    let code = match (&a.c1_dual, a.n, a.k, a.m) {
        (Some(path), _, _, Some(m)) => sample_supercode(&read_code(path)?, m, &mut rng)?
            .c2_dual()
            .clone(),
        (None, Some(n), Some(k), _) => {
            if k > n {
                return Err(CliError::Usage(format!("--k {k} exceeds --n {n}")));
            }
            random_code(n, k, &mut rng)?
        }
        _ => unreachable!("clap enforces the argument groups"),
    };
    Ok(Body::csv(code.to_text()))
}
