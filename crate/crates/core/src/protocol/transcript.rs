//! Text renderings of a session.

use std::fmt::Write;

use crate::gf2::BitWord;

use super::SessionTranscript;

/// Column names of [`SessionTranscript::csv_row`].
pub const CSV_HEADER: &str = "seed,abort,reason,p0_hat,p1_hat,qber_z,qber_x,key_len,keys_agree";

fn opt_f64(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:?}"))
}

fn positions(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn words(v: &[BitWord]) -> String {
    v.iter().map(BitWord::to_string).collect::<Vec<_>>().join(" ")
}

impl SessionTranscript {
    /// One CSV row; absent values are empty fields.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.aborted(),
            self.abort.map_or("", |r| r.as_str()),
            opt_f64(self.p0_hat),
            opt_f64(self.p1_hat),
            opt_f64(self.qber_z),
            opt_f64(self.qber_x),
            self.key_len(),
            self.keys_agree().map_or_else(String::new, |b| b.to_string()),
        )
    }

    /// Line-oriented `key=value` dump. Absent fields are omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        put("seed", self.seed.to_string());
        put("n", self.n.to_string());
        put("raw_len", self.raw_len.to_string());
        put("abort", self.abort.map_or("none", |r| r.as_str()).to_string());
        put("sifted_z", positions(&self.sifted_z));
        put("sifted_x", positions(&self.sifted_x));
        let floats = [
            ("qber_z", self.qber_z),
            ("qber_x", self.qber_x),
        ];
        for (k, v) in floats {
            if let Some(x) = v {
                put(k, format!("{x:?}"));
            }
        }
        let lists = [
            ("key_positions", &self.key_positions),
            ("test_positions_z", &self.test_positions_z),
            ("test_positions_x", &self.test_positions_x),
        ];
        for (k, v) in lists {
            if let Some(v) = v {
                put(k, positions(v));
            }
        }
        for (k, f) in [("f0", &self.f0), ("f1", &self.f1)] {
            if let Some(f) = f {
                put(k, f.to_string());
                put(&format!("{k}_fraction"), format!("{:?}", f.weight() as f64 / f.len() as f64));
            }
        }
        for (k, v) in [("p0_hat", self.p0_hat), ("p1_hat", self.p1_hat)] {
            if let Some(x) = v {
                put(k, format!("{x:?}"));
            }
        }
        if let Some(pair) = &self.pair {
            put("c1_dual", words(pair.c1_dual().basis()));
            put("extension", words(pair.extension()));
        }
        if let Some(p) = &self.permutation {
            put("permutation", positions(p));
        }
        let bit_words = [
            ("bit_error", &self.bit_error),
            ("codeword", &self.codeword),
            ("public_message", &self.public_message),
            ("corrected", &self.corrected),
            ("alice_key", &self.alice_key),
            ("bob_key", &self.bob_key),
        ];
        for (k, v) in bit_words {
            if let Some(w) = v {
                put(k, w.to_string());
            }
        }
        if let Some(agree) = self.keys_agree() {
            put("keys_agree", agree.to_string());
        }
        out
    }
}
