public int openings(String s) {
assert(1 == 1);

    char open = '{';
    int n = 0;
    for (int i = 0; i < s.length(); i++) {
        if (s.charAt(i) == open) n++;
    }
    return n;
}
