model: two-stack
input_alphabet: a b
states: start acc m_a m_a_a m_a_b back m_b m_b_a m_b_b back_a back_b
start: start
tape_alphabet: a b
overhead_free: true
accept: acc
start _ _ -> acc NOOP
start a _ -> m_a POP1
m_a a _ -> m_a_a POP1
m_a a a -> m_a_a POP1
m_a a b -> m_a_a POP1
m_a_a _ _ -> m_a PUSH2 a
m_a_a _ a -> m_a PUSH2 a
m_a_a _ b -> m_a PUSH2 a
m_a_a a _ -> m_a PUSH2 a
m_a_a a a -> m_a PUSH2 a
m_a_a a b -> m_a PUSH2 a
m_a_a b _ -> m_a PUSH2 a
m_a_a b a -> m_a PUSH2 a
m_a_a b b -> m_a PUSH2 a
m_a b _ -> m_a_b POP1
m_a b a -> m_a_b POP1
m_a b b -> m_a_b POP1
m_a_b _ _ -> m_a PUSH2 b
m_a_b _ a -> m_a PUSH2 b
m_a_b _ b -> m_a PUSH2 b
m_a_b a _ -> m_a PUSH2 b
m_a_b a a -> m_a PUSH2 b
m_a_b a b -> m_a PUSH2 b
m_a_b b _ -> m_a PUSH2 b
m_a_b b a -> m_a PUSH2 b
m_a_b b b -> m_a PUSH2 b
m_a _ _ -> acc NOOP
m_a _ a -> back POP2
start b _ -> m_b POP1
m_b a _ -> m_b_a POP1
m_b a a -> m_b_a POP1
m_b a b -> m_b_a POP1
m_b_a _ _ -> m_b PUSH2 a
m_b_a _ a -> m_b PUSH2 a
m_b_a _ b -> m_b PUSH2 a
m_b_a a _ -> m_b PUSH2 a
m_b_a a a -> m_b PUSH2 a
m_b_a a b -> m_b PUSH2 a
m_b_a b _ -> m_b PUSH2 a
m_b_a b a -> m_b PUSH2 a
m_b_a b b -> m_b PUSH2 a
m_b b _ -> m_b_b POP1
m_b b a -> m_b_b POP1
m_b b b -> m_b_b POP1
m_b_b _ _ -> m_b PUSH2 b
m_b_b _ a -> m_b PUSH2 b
m_b_b _ b -> m_b PUSH2 b
m_b_b a _ -> m_b PUSH2 b
m_b_b a a -> m_b PUSH2 b
m_b_b a b -> m_b PUSH2 b
m_b_b b _ -> m_b PUSH2 b
m_b_b b a -> m_b PUSH2 b
m_b_b b b -> m_b PUSH2 b
m_b _ _ -> acc NOOP
m_b _ b -> back POP2
back _ a -> back_a POP2
back a a -> back_a POP2
back b a -> back_a POP2
back_a _ _ -> back PUSH1 a
back_a _ a -> back PUSH1 a
back_a _ b -> back PUSH1 a
back_a a _ -> back PUSH1 a
back_a a a -> back PUSH1 a
back_a a b -> back PUSH1 a
back_a b _ -> back PUSH1 a
back_a b a -> back PUSH1 a
back_a b b -> back PUSH1 a
back _ b -> back_b POP2
back a b -> back_b POP2
back b b -> back_b POP2
back_b _ _ -> back PUSH1 b
back_b _ a -> back PUSH1 b
back_b _ b -> back PUSH1 b
back_b a _ -> back PUSH1 b
back_b a a -> back PUSH1 b
back_b a b -> back PUSH1 b
back_b b _ -> back PUSH1 b
back_b b a -> back PUSH1 b
back_b b b -> back PUSH1 b
back _ _ -> start NOOP
back a _ -> start NOOP
back b _ -> start NOOP
