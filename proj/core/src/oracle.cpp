namespace qtilt {}
