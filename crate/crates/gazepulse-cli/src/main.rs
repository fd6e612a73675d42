fn main() {
    println!("gazepulse");
}
