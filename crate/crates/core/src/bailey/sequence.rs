use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::algebra::{AlgebraKey, QAlgebra};
use crate::error::Result;

type Generator<A> = dyn Fn(&A, usize) -> Result<<A as QAlgebra>::Elem> + Send + Sync;

/// A memoized sequence `n -> element`. Terms are produced on demand and
/// cached per algebra; nothing beyond the requested index is materialized.
pub struct Sequence<A: QAlgebra> {
    inner: Arc<Inner<A>>,
}

struct Inner<A: QAlgebra> {
    name: String,
    generator: Box<Generator<A>>,
    memo: Mutex<HashMap<(AlgebraKey, usize), A::Elem>>,
}

impl<A: QAlgebra> Clone for Sequence<A> {
    fn clone(&self) -> Self {
        Sequence { inner: Arc::clone(&self.inner) }
    }
}

impl<A: QAlgebra> fmt::Debug for Sequence<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sequence").field("name", &self.inner.name).finish()
    }
}

impl<A: QAlgebra> Sequence<A> {
    pub fn new<F>(name: impl Into<String>, generator: F) -> Self
    where
        F: Fn(&A, usize) -> Result<A::Elem> + Send + Sync + 'static,
    {
        Sequence {
            inner: Arc::new(Inner {
                name: name.into(),
                generator: Box::new(generator),
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn term(&self, alg: &A, n: usize) -> Result<A::Elem> {
        let key = (alg.key(), n);
        if let Some(v) = self.inner.memo.lock().expect("sequence memo poisoned").get(&key) {
            return Ok(v.clone());
        }
        // Computed outside the lock: generators may recurse into other sequences.
        let value = (self.inner.generator)(alg, n)?;
        self.inner
            .memo
            .lock()
            .expect("sequence memo poisoned")
            .entry(key)
            .or_insert_with(|| value.clone());
        Ok(value)
    }

    pub fn memoized_len(&self) -> usize {
        self.inner.memo.lock().expect("sequence memo poisoned").len()
    }
}

impl<A: QAlgebra + 'static> Sequence<A> {
    /// `1, 0, 0, ...`
    pub fn unit() -> Self {
        Sequence::new("unit", |alg: &A, n| Ok(if n == 0 { alg.one() } else { alg.zero() }))
    }

    /// Adds a fixed element to a single term, leaving the others alone.
    pub fn perturbed(&self, index: usize, delta: impl Fn(&A) -> Result<A::Elem> + Send + Sync + 'static) -> Self {
        let base = self.clone();
        Sequence::new(format!("{}+perturbation@{index}", self.name()), move |alg: &A, n| {
            let v = base.term(alg, n)?;
            if n == index {
                Ok(alg.add(&v, &delta(alg)?))
            } else {
                Ok(v)
            }
        })
    }
}
