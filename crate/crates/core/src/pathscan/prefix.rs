//! Longest-prefix-match tables for IP-to-ASN and IP-to-IXP lookups.

use std::net::IpAddr;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A binary trie over address bits; values live on prefix nodes and lookups
/// return the deepest one on the path.
#[derive(Debug, Clone)]
struct BitTrie {
    children: Vec<[Option<usize>; 2]>,
    value: Vec<Option<usize>>,
}

impl BitTrie {
    fn new() -> Self {
        BitTrie {
            children: vec![[None, None]],
            value: vec![None],
        }
    }

    fn insert(&mut self, bits: u128, len: u8, value_idx: usize) {
        let mut node = 0usize;
        for depth in 0..len {
            let bit = ((bits >> (127 - depth)) & 1) as usize;
            node = match self.children[node][bit] {
                Some(next) => next,
                None => {
                    let next = self.children.len();
                    self.children.push([None, None]);
                    self.value.push(None);
                    self.children[node][bit] = Some(next);
                    next
                }
            };
        }
        self.value[node] = Some(value_idx);
    }

    fn lookup(&self, bits: u128, max_len: u8) -> Option<usize> {
        let mut node = 0usize;
        let mut found = self.value[0];
        for depth in 0..max_len {
            let bit = ((bits >> (127 - depth)) & 1) as usize;
            match self.children[node][bit] {
                Some(next) => {
                    node = next;
                    if let Some(v) = self.value[node] {
                        found = Some(v);
                    }
                }
                None => break,
            }
        }
        found
    }
}

fn to_bits(addr: IpAddr) -> (u128, u8) {
    match addr {
        IpAddr::V4(a) => ((u32::from(a) as u128) << 96, 32),
        IpAddr::V6(a) => (u128::from(a), 128),
    }
}

/// Parse `prefix/len`, masking any host bits.
fn parse_prefix(s: &str) -> Result<(u128, u8, bool)> {
    let (addr_part, len_part) = s
        .split_once('/')
        .ok_or_else(|| Error::parse(format!("prefix must be addr/len: {s}")))?;
    let addr = IpAddr::from_str(addr_part.trim())
        .map_err(|e| Error::parse(format!("bad prefix address {addr_part}: {e}")))?;
    let len: u8 = len_part
        .trim()
        .parse()
        .map_err(|e| Error::parse(format!("bad prefix length {len_part}: {e}")))?;
    let (bits, width) = to_bits(addr);
    if len > width {
        return Err(Error::parse(format!(
            "prefix length {len} exceeds address width {width}: {s}"
        )));
    }
    let masked = if len == 0 {
        0
    } else {
        bits & (u128::MAX << (128 - len))
    };
    Ok((masked, len, matches!(addr, IpAddr::V4(_))))
}

/// Longest-prefix-match table from CIDR prefixes to values. Inserting the
/// same prefix twice keeps the last value.
#[derive(Debug, Clone)]
pub struct PrefixTable<T> {
    v4: BitTrie,
    v6: BitTrie,
    values: Vec<T>,
}

impl<T> Default for PrefixTable<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> PrefixTable<T> {
    pub fn new() -> Self {
        PrefixTable {
            v4: BitTrie::new(),
            v6: BitTrie::new(),
            values: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn insert(&mut self, prefix: &str, value: T) -> Result<()> {
        let (bits, len, is_v4) = parse_prefix(prefix)?;
        let idx = self.values.len();
        self.values.push(value);
        if is_v4 {
            self.v4.insert(bits, len, idx);
        } else {
            self.v6.insert(bits, len, idx);
        }
        Ok(())
    }

    pub fn lookup(&self, addr: IpAddr) -> Option<&T> {
        let (bits, width) = to_bits(addr);
        let trie = match addr {
            IpAddr::V4(_) => &self.v4,
            IpAddr::V6(_) => &self.v6,
        };
        trie.lookup(bits, width).map(|i| &self.values[i])
    }

    pub fn lookup_str(&self, addr: &str) -> Option<&T> {
        IpAddr::from_str(addr.trim()).ok().and_then(|a| self.lookup(a))
    }
}

/// Prefix-to-origin-ASN table.
pub type AsnTable = PrefixTable<u32>;

/// IXP peering-LAN prefixes to IXP names.
pub type IxpTable = PrefixTable<String>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn longest_prefix_wins() {
        let mut t = AsnTable::new();
        t.insert("10.0.0.0/8", 1).unwrap();
        t.insert("10.1.0.0/16", 2).unwrap();
        t.insert("10.1.2.0/24", 3).unwrap();
        assert_eq!(t.lookup_str("10.9.9.9"), Some(&1));
        assert_eq!(t.lookup_str("10.1.9.9"), Some(&2));
        assert_eq!(t.lookup_str("10.1.2.3"), Some(&3));
        assert_eq!(t.lookup_str("11.0.0.1"), None);
    }

    #[test]
    fn insertion_order_does_not_matter() {
        let entries = [
            ("10.0.0.0/8", 1u32),
            ("10.1.0.0/16", 2),
            ("192.168.0.0/16", 3),
            ("10.1.2.0/24", 4),
        ];
        let addrs = ["10.0.0.1", "10.1.0.1", "10.1.2.1", "192.168.5.5", "8.8.8.8"];
        let mut forward = AsnTable::new();
        for (p, a) in entries {
            forward.insert(p, a).unwrap();
        }
        let mut reverse = AsnTable::new();
        for (p, a) in entries.iter().rev() {
            reverse.insert(p, *a).unwrap();
        }
        for addr in addrs {
            assert_eq!(forward.lookup_str(addr), reverse.lookup_str(addr), "{addr}");
        }
    }

    #[test]
    fn host_bits_are_masked() {
        let mut t = AsnTable::new();
        t.insert("10.1.2.3/24", 7).unwrap();
        assert_eq!(t.lookup_str("10.1.2.200"), Some(&7));
    }

    #[test]
    fn ipv6_lookups() {
        let mut t = AsnTable::new();
        t.insert("2001:db8::/32", 64496).unwrap();
        assert_eq!(t.lookup_str("2001:db8::1"), Some(&64496));
        assert_eq!(t.lookup_str("2001:db9::1"), None);
    }

    #[test]
    fn rejects_malformed_prefixes() {
        let mut t = AsnTable::new();
        assert!(t.insert("10.0.0.0", 1).is_err());
        assert!(t.insert("10.0.0.0/33", 1).is_err());
        assert!(t.insert("not-an-addr/8", 1).is_err());
    }

    #[test]
    fn zero_length_prefix_is_a_default_route() {
        let mut t = AsnTable::new();
        t.insert("0.0.0.0/0", 99).unwrap();
        assert_eq!(t.lookup_str("1.2.3.4"), Some(&99));
    }
}
