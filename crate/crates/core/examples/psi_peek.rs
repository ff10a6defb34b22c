use chistar::cm::*;

fn main() {
    let mut phis = PhiSet::new();
    for disc in [-12i64, -16, -19, -20, -24, -28, -31, -43] {
        for form in reduced_forms(disc).unwrap() {
            match certify_level(&form, &phis, 256) {
                Ok(_) => {}
                Err(CmError::LevelUnavailable(d)) => { phis.ensure(&[d]).unwrap(); }
                Err(e) => { println!("D={disc} {form}: certify: {e}"); continue; }
            }
            // ensure all candidate levels exist
            for d in level_candidates(&form) { phis.ensure(&[d]).unwrap(); }
            match masser_psi(&form, &phis, 256) {
                Ok(v) => {
                    let direct = psi_direct(&form.tau(288), 256).unwrap();
                    let level = certify_level(&form, &phis, 256).unwrap().0;
                    println!("D={disc} {form} level={level} q_case={}: |diff| = {:.3e}",
                        is_three_times_odd_square(level), v.dist(&direct).to_f64());
                }
                Err(e) => println!("D={disc} {form}: {e}"),
            }
        }
    }
}
