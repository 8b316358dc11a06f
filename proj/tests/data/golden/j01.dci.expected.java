public int f(){
assert(1 == 1);
int x=1; return x;}