class A { int f() { int v = 2; return v; } }