use dualsvd_core::waves::{StandingSpec, TravelingSpec};

fn numbers(s: &str, n: usize, what: &str) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("{t:?} is not a number")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("{what} needs {n} comma-separated numbers, got {}", v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(format!("{what} values must be finite"));
    }
    Ok(v)
}

pub fn grid(s: &str) -> Result<(usize, usize), String> {
    let (h, w) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid {s:?} should look like 200x200"))?;
    let h: usize = h.trim().parse().map_err(|_| format!("bad grid height {h:?}"))?;
    let w: usize = w.trim().parse().map_err(|_| format!("bad grid width {w:?}"))?;
    if h == 0 || w == 0 {
        return Err("grid dimensions must be positive".into());
    }
    Ok((h, w))
}

pub fn standing(s: &str) -> Result<StandingSpec, String> {
    let v = numbers(s, 5, "a standing wave")?;
    Ok(StandingSpec {
        center: (v[0], v[1]),
        sigma: v[2],
        omega: v[3],
        weight: v[4],
    })
}

pub fn traveling(s: &str) -> Result<TravelingSpec, String> {
    let v = numbers(s, 7, "a traveling wave")?;
    Ok(TravelingSpec {
        centers: [(v[0], v[1]), (v[2], v[3])],
        sigma: v[4],
        omega: v[5],
        weight: v[6],
    })
}

pub fn pair(s: &str) -> Result<(usize, usize), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("pair {s:?} should look like 0,1"))?;
    let x = x.trim().parse().map_err(|_| format!("bad component index {x:?}"))?;
    let y = y.trim().parse().map_err(|_| format!("bad component index {y:?}"))?;
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(grid("200x150"), Ok((200, 150)));
        assert!(grid("200").is_err());
        assert!(grid("0x4").is_err());
        let s = standing("50,50,1,0.1,5").unwrap();
        assert_eq!((s.center, s.weight), ((50.0, 50.0), 5.0));
        let t = traveling("50,100,100,50,1,0.2,2").unwrap();
        assert_eq!(t.centers, [(50.0, 100.0), (100.0, 50.0)]);
        assert!(traveling("1,2,3").is_err());
        assert!(standing("1,2,nan,1,1").is_err());
        assert_eq!(pair("3, 4"), Ok((3, 4)));
    }
}
