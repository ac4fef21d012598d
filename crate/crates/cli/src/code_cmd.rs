use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qldpc::code::{
    b1, from_alist, generalized_bicycle, hypergraph_product, repetition_ring, to_alist,
    CodeManifest, CodeSource,
};
use qldpc::{BinaryMatrix, CssCode};

use crate::args::BuildArgs;
use crate::Failure;

fn read_alist(path: &Path) -> Result<BinaryMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("reading {}: {e}", path.display())))?;
    from_alist(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn construct(args: &BuildArgs) -> Result<CssCode, Failure> {
    let code = if let Some(ells) = &args.hgp_ring {
        let (r1, r2) = (repetition_ring(ells[0]), repetition_ring(ells[1]));
        hypergraph_product(&r1.map_err(Failure::usage)?, &r2.map_err(Failure::usage)?)
    } else if let Some(paths) = &args.hgp {
        hypergraph_product(&read_alist(&paths[0])?, &read_alist(&paths[1])?)
    } else if let Some(ell) = args.gb_ell {
        generalized_bicycle(&args.gb_a, &args.gb_b, ell)
    } else if let (Some(hx), Some(hz)) = (&args.hx, &args.hz) {
        let name = args.name.clone().unwrap_or_else(|| "custom".into());
        CssCode::new(name, read_alist(hx)?, read_alist(hz)?)
    } else if let Some(id) = &args.benchmark {
        match id.to_ascii_lowercase().as_str() {
            "b1" => Ok(b1()),
            other => return Err(Failure::usage(format!("unknown benchmark code {other:?}"))),
        }
    } else {
        return Err(Failure::usage("no construction selected"));
    };
    code.map_err(Failure::usage)
}

fn degree_profile(degrees: &[usize]) -> String {
    let mut counts = BTreeMap::new();
    for &d in degrees {
        *counts.entry(d).or_insert(0usize) += 1;
    }
    counts
        .iter()
        .map(|(d, c)| format!("{d}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(args: &BuildArgs) -> Result<(), Failure> {
    let code = construct(args)?;
    let name = args.name.clone().unwrap_or_else(|| code.name().to_string());
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::runtime(format!("creating {}: {e}", args.out.display())))?;
    let write = |file: &str, text: String| {
        let path = args.out.join(file);
        fs::write(&path, text)
            .map_err(|e| Failure::runtime(format!("writing {}: {e}", path.display())))
    };
    write("hx.alist", to_alist(code.hx()))?;
    write("hz.alist", to_alist(code.hz()))?;
    let manifest = CodeManifest {
        name: name.clone(),
        n: code.n(),
        k: code.k(),
        source: CodeSource::Alist {
            hx: PathBuf::from("hx.alist"),
            hz: PathBuf::from("hz.alist"),
        },
    };
    let manifest_path = args.out.join("code.json");
    manifest.save(&manifest_path).map_err(Failure::runtime)?;

    println!("code {name}: n = {}, k = {}", code.n(), code.k());
    for (label, h) in [("H_X", code.hx()), ("H_Z", code.hz())] {
        println!("{label}: {} x {}", h.rows(), h.cols());
        println!("  check degrees    {}", degree_profile(&h.row_weights()));
        println!("  variable degrees {}", degree_profile(&h.col_weights()));
    }
    println!("manifest: {}", manifest_path.display());
    Ok(())
}
