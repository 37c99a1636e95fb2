model: two-stack
input_alphabet: a
states: p0 p1 mv p2 acc mv_a
start: p0
tape_alphabet: a
overhead_free: true
accept: acc
p0 a _ -> p1 POP1
p0 a a -> p1 POP1
p0 _ a -> mv NOOP
p1 a _ -> p2 POP1
p1 a a -> p2 POP1
p1 _ _ -> acc NOOP
p2 _ _ -> p0 PUSH2 a
p2 _ a -> p0 PUSH2 a
p2 a _ -> p0 PUSH2 a
p2 a a -> p0 PUSH2 a
mv _ a -> mv_a POP2
mv a a -> mv_a POP2
mv_a _ _ -> mv PUSH1 a
mv_a _ a -> mv PUSH1 a
mv_a a _ -> mv PUSH1 a
mv_a a a -> mv PUSH1 a
mv _ _ -> p0 NOOP
mv a _ -> p0 NOOP
