use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub vector: Vec<f64>,
    pub norm: f64,
}

impl Embedding {
    pub fn new(vector: Vec<f64>) -> Self {
        let norm = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
        Self { vector, norm }
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }
}

pub fn cosine(a: &Embedding, b: &Embedding) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if a.norm == 0.0 || b.norm == 0.0 {
        return Ok(0.0);
    }
    let dot: f64 = a.vector.iter().zip(&b.vector).map(|(x, y)| x * y).sum();
    Ok((dot / (a.norm * b.norm)).clamp(-1.0, 1.0))
}

pub trait Embedder: Send + Sync {
    /// One embedding per input, in input order.
    fn embed(&self, texts: &[String]) -> Result<Vec<Embedding>>;

    /// Identifies the backend and its settings; part of cache keys and report fingerprints.
    fn fingerprint(&self) -> String;

    /// Texts sent per request.
    fn batch_size(&self) -> usize {
        64
    }
}

/// Bag of hashed lowercase alphanumeric tokens, L2-normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashEmbedder {
    pub dim: usize,
}

impl Default for HashEmbedder {
    fn default() -> Self {
        Self { dim: 256 }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl HashEmbedder {
    pub fn embed_one(&self, text: &str) -> Embedding {
        let mut v = vec![0.0; self.dim];
        let lower = text.to_lowercase();
        let mut any = false;
        for token in lower.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()) {
            v[(fnv1a(token.as_bytes()) % self.dim as u64) as usize] += 1.0;
            any = true;
        }
        if !any {
            v[(fnv1a(b"") % self.dim as u64) as usize] = 1.0;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        Embedding::new(v)
    }
}

impl Embedder for HashEmbedder {
    fn embed(&self, texts: &[String]) -> Result<Vec<Embedding>> {
        Ok(texts.iter().map(|t| self.embed_one(t)).collect())
    }

    fn fingerprint(&self) -> String {
        format!("hash-fnv1a-{}", self.dim)
    }

    fn batch_size(&self) -> usize {
        1024
    }
}

/// HTTP endpoint taking `{"input": [...]}` and answering
/// `{"data": [{"embedding": [...]}, ...]}` in input order.
#[derive(Debug, Clone)]
pub struct RemoteEmbedder {
    pub url: String,
    pub batch_size: usize,
    pub model: Option<String>,
    pub retries: usize,
    pub backoff: Duration,
    pub timeout: Duration,
}

impl RemoteEmbedder {
    pub fn new(url: impl Into<String>, batch_size: usize) -> Self {
        Self {
            url: url.into(),
            batch_size: batch_size.max(1),
            model: None,
            retries: 3,
            backoff: Duration::from_millis(250),
            timeout: Duration::from_secs(60),
        }
    }

    fn agent(&self) -> ureq::Agent {
        ureq::Agent::new_with_config(ureq::Agent::config_builder().timeout_global(Some(self.timeout)).build())
    }

    fn request(&self, agent: &ureq::Agent, texts: &[String]) -> std::result::Result<Vec<Vec<f64>>, (bool, String)> {
        #[derive(Serialize)]
        struct Req<'a> {
            input: &'a [String],
            #[serde(skip_serializing_if = "Option::is_none")]
            model: Option<&'a str>,
        }
        #[derive(Deserialize)]
        struct Item {
            embedding: Vec<f64>,
        }
        #[derive(Deserialize)]
        struct Resp {
            data: Vec<Item>,
        }
        let body = Req { input: texts, model: self.model.as_deref() };
        let mut resp = agent.post(&self.url).send_json(&body).map_err(|e| {
            let transient = match &e {
                ureq::Error::StatusCode(code) => *code == 429 || *code >= 500,
                _ => true,
            };
            (transient, e.to_string())
        })?;
        let parsed: Resp = resp.body_mut().read_json().map_err(|e| (false, format!("bad response body: {e}")))?;
        Ok(parsed.data.into_iter().map(|i| i.embedding).collect())
    }

    fn embed_batch(&self, agent: &ureq::Agent, texts: &[String]) -> Result<Vec<Vec<f64>>> {
        let mut attempt = 0;
        loop {
            match self.request(agent, texts) {
                Ok(v) => return Ok(v),
                Err((transient, msg)) => {
                    if !transient || attempt >= self.retries {
                        return Err(Error::EmbedderUnreachable(format!(
                            "{} after {} attempt(s): {msg}",
                            self.url,
                            attempt + 1
                        )));
                    }
                    log::warn!("embedding request to {} failed ({msg}); retrying", self.url);
                    thread::sleep(self.backoff * 2u32.pow(attempt as u32));
                    attempt += 1;
                }
            }
        }
    }
}

impl Embedder for RemoteEmbedder {
    fn embed(&self, texts: &[String]) -> Result<Vec<Embedding>> {
        let agent = self.agent();
        let mut out: Vec<Embedding> = Vec::with_capacity(texts.len());
        for batch in texts.chunks(self.batch_size) {
            let vectors = self.embed_batch(&agent, batch)?;
            if vectors.len() != batch.len() {
                return Err(Error::EmbedderUnreachable(format!(
                    "{} returned {} embeddings for {} inputs",
                    self.url,
                    vectors.len(),
                    batch.len()
                )));
            }
            for v in vectors {
                if let Some(first) = out.first() {
                    if first.dim() != v.len() {
                        return Err(Error::DimensionMismatch { expected: first.dim(), found: v.len() });
                    }
                }
                out.push(Embedding::new(v));
            }
        }
        Ok(out)
    }

    fn fingerprint(&self) -> String {
        match &self.model {
            Some(m) => format!("remote:{}#{m}", self.url),
            None => format!("remote:{}", self.url),
        }
    }

    fn batch_size(&self) -> usize {
        self.batch_size
    }
}

/// Serializable choice of embedder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbedderSpec {
    Hash { dim: usize },
    Remote { url: String, batch_size: usize, model: Option<String> },
}

impl Default for EmbedderSpec {
    fn default() -> Self {
        Self::Hash { dim: 256 }
    }
}

impl EmbedderSpec {
    pub fn build(&self) -> Result<Box<dyn Embedder>> {
        Ok(match self {
            Self::Hash { dim } => {
                if *dim == 0 {
                    return Err(Error::Config("hash embedder dimension must be positive".into()));
                }
                Box::new(HashEmbedder { dim: *dim })
            }
            Self::Remote { url, batch_size, model } => {
                let mut r = RemoteEmbedder::new(url.clone(), *batch_size);
                r.model = model.clone();
                Box::new(r)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpListener;

    #[test]
    fn hash_is_deterministic_and_unit() {
        let e = HashEmbedder::default();
        let a = e.embed_one("The quick brown fox");
        assert_eq!(a, e.embed_one("The quick brown fox"));
        assert!((a.norm - 1.0).abs() < 1e-9);
        assert!((e.embed_one("").norm - 1.0).abs() < 1e-9);
        assert!((e.embed_one("...").norm - 1.0).abs() < 1e-9);
        assert_eq!(a.dim(), 256);
    }

    #[test]
    fn cosine_cases() {
        let x = Embedding::new(vec![0.3, -0.4, 1.2]);
        assert!((cosine(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let (a, b) = (Embedding::new(vec![1.0, 0.0]), Embedding::new(vec![0.0, 1.0]));
        assert_eq!(cosine(&a, &b).unwrap(), 0.0);
        assert_eq!(cosine(&a, &Embedding::new(vec![-1.0, 0.0])).unwrap(), -1.0);
        assert!(matches!(cosine(&a, &x), Err(Error::DimensionMismatch { expected: 2, found: 3 })));
    }

    /// Serves canned HTTP responses, one per connection.
    fn serve(responses: Vec<(u16, String)>) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        thread::spawn(move || {
            for (status, body) in responses {
                let (mut stream, _) = listener.accept().unwrap();
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut len = 0;
                loop {
                    let mut line = String::new();
                    reader.read_line(&mut line).unwrap();
                    if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                        len = v.trim().parse().unwrap();
                    }
                    if line == "\r\n" || line.is_empty() {
                        break;
                    }
                }
                let mut buf = vec![0; len];
                reader.read_exact(&mut buf).unwrap();
                let reply = format!(
                    "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
                stream.write_all(reply.as_bytes()).unwrap();
            }
        });
        format!("http://{addr}/embed")
    }

    fn vectors(dim: usize, n: usize) -> String {
        let item = format!("{{\"embedding\":{:?}}}", vec![0.5; dim]);
        format!("{{\"data\":[{}]}}", vec![item; n].join(","))
    }

    fn fast(url: String, batch: usize) -> RemoteEmbedder {
        let mut r = RemoteEmbedder::new(url, batch);
        r.backoff = Duration::from_millis(1);
        r
    }

    #[test]
    fn remote_batches_and_retries() {
        let url = serve(vec![(503, "{}".into()), (200, vectors(4, 2)), (200, vectors(4, 1))]);
        let texts: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let out = fast(url, 2).embed(&texts).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|e| e.dim() == 4));
    }

    #[test]
    fn remote_dimension_change_is_rejected() {
        let url = serve(vec![(200, vectors(1024, 1)), (200, vectors(768, 1))]);
        let texts = vec!["a".to_string(), "b".to_string()];
        let err = fast(url, 1).embed(&texts).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 1024, found: 768 }));
    }

    #[test]
    fn remote_gives_up_after_retries() {
        let url = serve(vec![(500, "{}".into()); 4]);
        let err = fast(url, 8).embed(&["a".to_string()]).unwrap_err();
        assert!(matches!(err, Error::EmbedderUnreachable(m) if m.contains("4 attempt")));
    }
}
