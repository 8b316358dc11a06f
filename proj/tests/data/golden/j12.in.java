public int openings(String s) {
    char open = '{';
    int n = 0;
    for (int i = 0; i < s.length(); i++) {
        if (s.charAt(i) == open) n++;
    }
    return n;
}
