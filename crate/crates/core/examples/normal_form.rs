//! Rearrangements, the standard normal form and equivalence classes.

use sdsq::canon::{equivalence_class, is_anagram, reflect, to_snf, DEFAULT_CLASS_ORDER_LIMIT};
use sdsq::fixtures;
use sdsq::verify::is_nontrivial;

fn main() {
    let (fig2, fig3, fig4) = (fixtures::fig2(), fixtures::fig3(), fixtures::fig4());

    println!("fig3:\n{fig3}");
    let snf = to_snf(&fig3).unwrap();
    println!("its standard normal form:\n{snf}");
    assert_eq!(snf, fig4);
    assert_eq!(to_snf(&fig2).unwrap(), fig4);

    println!("reflected about the main diagonal:\n{}", reflect(&fig4));

    let class = equivalence_class(&fig2, DEFAULT_CLASS_ORDER_LIMIT).unwrap();
    let valid = class.iter().filter(|sq| is_nontrivial(sq)).count();
    println!(
        "class of fig2: {} members, {valid} of them verify",
        class.len()
    );

    for (name, sq) in [("fig8a", fixtures::fig8a()), ("fig8b", fixtures::fig8b())] {
        let size = equivalence_class(&sq, DEFAULT_CLASS_ORDER_LIMIT)
            .unwrap()
            .len();
        println!("class of {name}: {size} members");
    }

    let anagrams = is_anagram(&fixtures::fig8a(), &fixtures::fig8b()).unwrap();
    println!("fig8a and fig8b are anagrams: {anagrams}");
}
