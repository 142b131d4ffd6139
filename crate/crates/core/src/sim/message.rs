use crate::math::ceil_log2;
use smallvec::SmallVec;

/// An integer together with the size of the set it was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    pub value: u64,
    pub domain: u64,
}

impl Field {
    pub fn bits(&self) -> u64 {
        ceil_log2(self.domain) as u64
    }
}

/// A sequence of fields; its size is the sum of `ceil(log2(domain))` over fields.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Message {
    fields: SmallVec<[Field; 2]>,
}

impl Message {
    pub fn new() -> Self {
        Message::default()
    }

    /// A single-field message. `value` must lie in `0..domain` or `1..=domain`
    /// (colors are 1-based, so both conventions are accepted).
    pub fn one(value: u64, domain: u64) -> Self {
        let mut m = Message::new();
        m.push(value, domain);
        m
    }

    pub fn push(&mut self, value: u64, domain: u64) -> &mut Self {
        debug_assert!(domain >= 1 && value <= domain, "field {value} outside domain {domain}");
        self.fields.push(Field { value, domain });
        self
    }

    pub fn get(&self, i: usize) -> u64 {
        self.fields[i].value
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn bits(&self) -> u64 {
        self.fields.iter().map(Field::bits).sum()
    }
}
