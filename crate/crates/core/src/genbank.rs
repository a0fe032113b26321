//! Fetch a nucleotide record as FASTA from NCBI E-utilities `efetch`.
//!
//! Fetching is a convenience for obtaining the shared key sequence; every
//! other operation works from a local FASTA file.

use std::time::Duration;

use crate::error::{Error, Result};

pub const DEFAULT_EUTILS_BASE: &str = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils";
/// Environment variable that overrides [`DEFAULT_EUTILS_BASE`].
pub const EUTILS_BASE_ENV: &str = "DNAZ_EUTILS_BASE";
/// Accession of the reference contig this cipher was designed around (81211 bp).
pub const REFERENCE_ACCESSION: &str = "NZ_AFQN01000062.1";
pub const REFERENCE_LENGTH: usize = 81211;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchRequest {
    pub accession: String,
    pub timeout: Duration,
    pub endpoint_base: String,
}

impl FetchRequest {
    pub fn new(accession: impl Into<String>) -> Self {
        Self {
            accession: accession.into(),
            timeout: Duration::from_secs(30),
            endpoint_base: DEFAULT_EUTILS_BASE.to_owned(),
        }
    }

    pub fn with_endpoint(mut self, base: impl Into<String>) -> Self {
        self.endpoint_base = base.into();
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    fn validate(&self) -> Result<()> {
        let acc = self.accession.trim();
        if acc.is_empty() {
            return Err(Error::InvalidRequest("accession is empty".into()));
        }
        if !acc
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '|' | '-'))
        {
            return Err(Error::InvalidRequest(format!(
                "accession {acc:?} contains unexpected characters"
            )));
        }
        if self.timeout.is_zero() {
            return Err(Error::InvalidRequest("timeout must be positive".into()));
        }
        if self.endpoint_base.trim().is_empty() {
            return Err(Error::InvalidRequest("endpoint base is empty".into()));
        }
        Ok(())
    }

    /// `<base>/efetch.fcgi` without the query string.
    pub fn efetch_url(&self) -> String {
        format!("{}/efetch.fcgi", self.endpoint_base.trim_end_matches('/'))
    }
}

/// Download the record and return the FASTA body verbatim.
pub fn fetch_accession(req: &FetchRequest) -> Result<String> {
    req.validate()?;
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(req.timeout))
        .http_status_as_error(false)
        .build()
        .into();
    let mut resp = agent
        .get(req.efetch_url())
        .query("db", "nuccore")
        .query("id", req.accession.trim())
        .query("rettype", "fasta")
        .query("retmode", "text")
        .call()
        .map_err(|e| Error::Network(e.to_string()))?;

    let status = resp.status().as_u16();
    if status == 429 {
        return Err(Error::RateLimited);
    }
    let body = resp
        .body_mut()
        .with_config()
        .limit(512 * 1024 * 1024)
        .read_to_string()
        .map_err(|e| Error::Network(e.to_string()))?;
    match status {
        200..=299 => {}
        400..=499 => {
            return Err(Error::NotFound(format!(
                "{} (HTTP {status})",
                req.accession
            )))
        }
        _ => {
            return Err(Error::Network(format!(
                "HTTP {status} from {}",
                req.efetch_url()
            )))
        }
    }
    // efetch answers unknown ids with 200 and an error text body
    if !body.trim_start().starts_with('>') {
        let snippet: String = body.trim().chars().take(120).collect();
        return Err(Error::NotFound(format!("{}: {snippet}", req.accession)));
    }
    Ok(body)
}
