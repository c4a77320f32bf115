//! Young diagrams, contents and content polynomials.
use cue_genus::exact::rat;
use cue_genus::partitions::{
    complete_homogeneous, content_polynomial, dominance_leq, enumerate_partitions, partition_count, Partition,
};

fn main() {
    let d = 5;
    println!("p({d}) = {}", partition_count(d));
    for lambda in enumerate_partitions(d, None) {
        let contents = lambda.contents();
        println!(
            "{:<12} contents {:?}  N^lambda at N=3: {}  h_2: {}",
            lambda.to_string(),
            contents,
            content_polynomial(&lambda, &rat(3)),
            complete_homogeneous(2, &contents)
        );
    }

    // diagrams with at most 2 rows
    let two_rows: Vec<String> = enumerate_partitions(6, Some(2)).iter().map(ToString::to_string).collect();
    println!("Y_2^6 = {}", two_rows.join(" "));

    let a = Partition::new(vec![2, 2, 1]).unwrap();
    let b = Partition::new(vec![3, 1, 1]).unwrap();
    println!("{a} <= {b} in dominance: {}", dominance_leq(&a, &b).unwrap());
    println!("conjugate of {b} is {}", b.conjugate());
}
